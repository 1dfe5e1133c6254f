#pragma once

// Compositional semantics: the standard fixed-point semantics and the
// bound-limited variant in which mu/nu are read off the ordinal-indexed
// approximant ladders at the clock bound.
//
// Ladders over a finite state set are monotone and stabilize after at most
// |W| strict steps, so the approximant at any stage at or beyond the
// stabilization index (in particular at every infinite ordinal) is the
// fixed point itself.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mucalc/error.hpp"
#include "mucalc/formula.hpp"
#include "mucalc/kripke.hpp"
#include "mucalc/ordinal.hpp"
#include "mucalc/state_set.hpp"

namespace mucalc {

// Label -> set of states. Labels that are not mentioned denote the empty set,
// but evaluating a formula with a free label missing here is an error.
using Assignment = std::map<std::string, StateSet>;

enum class FixpointKind { mu, nu };

inline const char* to_string(FixpointKind k) { return k == FixpointKind::mu ? "mu" : "nu"; }

// F^0, F^1, ..., F^{n*} where F^{n*} == F^{n*+1}.
struct ApproximantLadder {
  FixpointKind kind;
  std::vector<StateSet> stages;

  std::size_t stabilization_index() const noexcept { return stages.size() - 1; }
  const StateSet& fixed_point() const { return stages.back(); }

  // F^gamma for any ordinal gamma.
  const StateSet& at(const Ordinal& gamma) const {
    const auto n = gamma.to_finite();
    if (!n || *n >= stages.size()) return fixed_point();
    return stages[static_cast<std::size_t>(*n)];
  }
};

namespace detail {

class Evaluator {
 public:
  // bound == nullopt selects the standard semantics.
  Evaluator(const KripkeModel& m, const Formula& f, std::optional<Ordinal> bound)
      : m_(m), f_(f), bound_(std::move(bound)) {
    if (bound_ && bound_->is_zero()) throw InvalidArgument("clock bound must be at least 1");
  }

  StateSet eval(NodeId id, Assignment& env) const {
    const std::size_t n = m_.size();
    switch (f_.kind(id)) {
      case NodeKind::prop:
        return m_.valuation(f_.symbol(id));
      case NodeKind::neg_prop:
        return m_.valuation(f_.symbol(id)).complement();
      case NodeKind::label: {
        auto it = env.find(f_.symbol(id));
        return it == env.end() ? StateSet(n) : it->second;
      }
      case NodeKind::disj:
        return eval(f_.child(id, 0), env) | eval(f_.child(id, 1), env);
      case NodeKind::conj:
        return eval(f_.child(id, 0), env) & eval(f_.child(id, 1), env);
      case NodeKind::diamond: {
        const StateSet sub = eval(f_.child(id), env);
        StateSet out(n);
        for (StateIndex w = 0; w < n; ++w)
          for (StateIndex v : m_.successor_indices(w))
            if (sub.contains(v)) {
              out.insert(w);
              break;
            }
        return out;
      }
      case NodeKind::box: {
        const StateSet sub = eval(f_.child(id), env);
        StateSet out(n);
        for (StateIndex w = 0; w < n; ++w) {
          const auto succ = m_.successor_indices(w);
          if (std::all_of(succ.begin(), succ.end(), [&](StateIndex v) { return sub.contains(v); }))
            out.insert(w);
        }
        return out;
      }
      case NodeKind::mu:
      case NodeKind::nu: {
        const ApproximantLadder ladder = build_ladder(id, env);
        return bound_ ? ladder.at(*bound_) : ladder.fixed_point();
      }
    }
    return StateSet(n);
  }

  // The body operator A |-> [[body]] under env[A/X].
  StateSet apply(NodeId binder, Assignment& env, const StateSet& a) const {
    const std::string& x = f_.symbol(binder);
    auto saved = env.find(x) == env.end() ? std::nullopt : std::optional<StateSet>(env[x]);
    env[x] = a;
    StateSet out = eval(f_.child(binder), env);
    if (saved)
      env[x] = *saved;
    else
      env.erase(x);
    return out;
  }

  ApproximantLadder build_ladder(NodeId binder, Assignment& env) const {
    const FixpointKind kind = f_.kind(binder) == NodeKind::mu ? FixpointKind::mu : FixpointKind::nu;
    ApproximantLadder ladder{kind, {}};
    ladder.stages.push_back(kind == FixpointKind::mu ? StateSet(m_.size()) : m_.all_states());
    for (;;) {
      StateSet next = apply(binder, env, ladder.stages.back());
      if (next == ladder.stages.back()) break;
      ladder.stages.push_back(std::move(next));
    }
    return ladder;
  }

 private:
  const KripkeModel& m_;
  const Formula& f_;
  std::optional<Ordinal> bound_;
};

inline void require_covered(const Formula& f, const Assignment& s, const std::string& extra = {}) {
  for (const auto& x : free_labels(f)) {
    if (x == extra || s.contains(x)) continue;
    throw InvalidArgument("free label '" + x + "' is not covered by the assignment");
  }
}

inline void require_bound(const Ordinal& bound) {
  if (bound.is_zero()) throw InvalidArgument("clock bound must be at least 1");
}

// Wraps a standalone body as the binder kind(X). body, so that ladder
// construction can reuse the evaluator's fixpoint machinery.
inline Formula wrap_binder(const Formula& body, const std::string& x, FixpointKind kind) {
  return kind == FixpointKind::mu ? Formula::mu(x, body) : Formula::nu(x, body);
}

}  // namespace detail

// {w | M, w |=^bound_{s[A/X]} body}
inline StateSet operator_apply(const KripkeModel& m, const Formula& body, const std::string& x,
                               const Assignment& s, const Ordinal& bound, const StateSet& a) {
  detail::require_bound(bound);
  detail::require_covered(body, s, x);
  Assignment env = s;
  env[x] = a;
  return detail::Evaluator(m, body, bound).eval(body.root(), env);
}

// Ladder of the bounded operator of `body` in X.
inline ApproximantLadder approximant_ladder(const KripkeModel& m, const Formula& body,
                                            const std::string& x, const Assignment& s,
                                            const Ordinal& bound, FixpointKind kind) {
  detail::require_bound(bound);
  detail::require_covered(body, s, x);
  const Formula wrapped = detail::wrap_binder(body, x, kind);
  Assignment env = s;
  return detail::Evaluator(m, wrapped, bound).build_ladder(wrapped.root(), env);
}

// Ladder of the standard (unbounded) operator.
inline ApproximantLadder standard_ladder(const KripkeModel& m, const Formula& body,
                                         const std::string& x, const Assignment& s, FixpointKind kind) {
  detail::require_covered(body, s, x);
  const Formula wrapped = detail::wrap_binder(body, x, kind);
  Assignment env = s;
  return detail::Evaluator(m, wrapped, std::nullopt).build_ladder(wrapped.root(), env);
}

// F_kind^gamma of the bounded operator of `body`.
inline StateSet approximant(const KripkeModel& m, const Formula& body, const std::string& x,
                            const Assignment& s, const Ordinal& bound, FixpointKind kind,
                            const Ordinal& gamma) {
  return approximant_ladder(m, body, x, s, bound, kind).at(gamma);
}

inline StateSet eval_bounded(const KripkeModel& m, const Formula& f, const Assignment& s,
                             const Ordinal& bound) {
  detail::require_bound(bound);
  detail::require_covered(f, s);
  Assignment env = s;
  return detail::Evaluator(m, f, bound).eval(f.root(), env);
}

inline StateSet eval_bounded(const KripkeModel& m, const Formula& f, const Ordinal& bound) {
  return eval_bounded(m, f, Assignment{}, bound);
}

inline StateSet eval_standard(const KripkeModel& m, const Formula& f, const Assignment& s = {}) {
  detail::require_covered(f, s);
  Assignment env = s;
  return detail::Evaluator(m, f, std::nullopt).eval(f.root(), env);
}

// Smallest gamma < bound with w in F_mu^{gamma+1}: the clock value a verifier
// should announce at the root of `f`. Absent when w is not in the bounded
// truth set.
inline std::optional<Ordinal> least_witness(const KripkeModel& m, StateIndex w, const Formula& f,
                                            const Assignment& s, const Ordinal& bound) {
  if (f.kind(f.root()) != NodeKind::mu) throw InvalidArgument("least_witness needs a mu-rooted formula");
  const ApproximantLadder ladder =
      approximant_ladder(m, f.subformula(f.child(f.root())), f.symbol(f.root()), s, bound, FixpointKind::mu);
  // F^{gamma+1} for gamma >= n* is the fixed point, already covered by gamma = n*.
  for (std::size_t g = 0; g <= ladder.stabilization_index(); ++g) {
    const Ordinal gamma(g);
    if (!(gamma < bound)) break;
    if (ladder.at(gamma.successor()).contains(w)) return gamma;
  }
  return std::nullopt;
}

// The witness reading of the bounded fixpoint clauses: mu holds iff some
// F^{gamma+1} with gamma < bound contains w; nu iff every one does. Used to
// cross-check the direct F^bound reading.
inline StateSet witness_truth_set(const ApproximantLadder& ladder, const Ordinal& bound) {
  const std::size_t universe = ladder.stages.front().universe();
  StateSet out = ladder.kind == FixpointKind::mu ? StateSet(universe) : StateSet::full(universe);
  for (std::size_t g = 0; g <= ladder.stabilization_index(); ++g) {
    const Ordinal gamma(g);
    if (!(gamma < bound)) break;
    if (ladder.kind == FixpointKind::mu)
      out |= ladder.at(gamma.successor());
    else
      out &= ladder.at(gamma.successor());
  }
  return out;
}

}  // namespace mucalc
