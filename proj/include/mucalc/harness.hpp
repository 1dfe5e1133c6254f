#pragma once

// Differential testing between the bounded game semantics, the bounded
// compositional semantics and the standard semantics, plus the random
// instance generators and an unmemoized game oracle that back it.
//
// The equivalences checked here are theorems; any mismatch is an
// implementation bug, reported with a counterexample payload.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "mucalc/detail/random.hpp"
#include "mucalc/formula.hpp"
#include "mucalc/game.hpp"
#include "mucalc/kripke.hpp"
#include "mucalc/ordinal.hpp"
#include "mucalc/semantics.hpp"

namespace mucalc {

struct InstanceParams {
  std::uint64_t seed = 0;
  std::size_t max_states = 4;
  double edge_density = 0.4;
  std::size_t prop_count = 2;
  std::size_t max_depth = 3;
  std::size_t max_fixpoints = 2;
  std::uint64_t gamma_min = 1;
  std::uint64_t gamma_max = 5;
  std::size_t naive_budget = 100000;

  void validate() const {
    if (max_states < 1) throw InvalidArgument("max_states must be at least 1");
    if (!(edge_density >= 0.0 && edge_density <= 1.0)) throw InvalidArgument("edge_density must lie in [0, 1]");
    if (prop_count < 1) throw InvalidArgument("prop_count must be at least 1");
    if (gamma_min < 1 || gamma_max < gamma_min) throw InvalidArgument("gamma range must satisfy 1 <= min <= max");
  }
};

inline void to_json(nlohmann::json& j, const InstanceParams& p) {
  j = {{"seed", p.seed},           {"max_states", p.max_states},       {"edge_density", p.edge_density},
       {"prop_count", p.prop_count}, {"max_depth", p.max_depth},       {"max_fixpoints", p.max_fixpoints},
       {"gamma_min", p.gamma_min},   {"gamma_max", p.gamma_max},       {"naive_budget", p.naive_budget}};
}

// Missing keys keep their defaults.
inline void from_json(const nlohmann::json& j, InstanceParams& p) {
  if (!j.is_object()) throw InvalidArgument("instance parameters must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "seed") p.seed = value.get<std::uint64_t>();
    else if (key == "max_states") p.max_states = value.get<std::size_t>();
    else if (key == "edge_density") p.edge_density = value.get<double>();
    else if (key == "prop_count") p.prop_count = value.get<std::size_t>();
    else if (key == "max_depth") p.max_depth = value.get<std::size_t>();
    else if (key == "max_fixpoints") p.max_fixpoints = value.get<std::size_t>();
    else if (key == "gamma_min") p.gamma_min = value.get<std::uint64_t>();
    else if (key == "gamma_max") p.gamma_max = value.get<std::uint64_t>();
    else if (key == "naive_budget") p.naive_budget = value.get<std::size_t>();
    else throw InvalidArgument("unknown instance parameter '" + key + "'");
  }
}

// p, q, r, s, t, then p5, p6, ...
inline std::vector<std::string> proposition_names(std::size_t count) {
  static const char* base[] = {"p", "q", "r", "s", "t"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(i < 5 ? base[i] : "p" + std::to_string(i));
  return out;
}

namespace detail {

class SentenceGenerator {
 public:
  SentenceGenerator(std::uint64_t seed, const InstanceParams& p)
      : rng_(seed), props_(proposition_names(p.prop_count)), fixpoints_left_(p.max_fixpoints) {}

  Formula generate(std::size_t depth) {
    std::vector<std::string> scope;
    return node(depth, scope);
  }

 private:
  Formula atom(const std::vector<std::string>& scope) {
    // Labels are favoured so that most binders are actually used.
    if (!scope.empty() && rng_.bernoulli(0.7)) return Formula::label(scope[rng_.below(scope.size())]);
    const std::string& p = props_[rng_.below(props_.size())];
    return rng_.bernoulli(0.25) ? Formula::neg_prop(p) : Formula::prop(p);
  }

  std::string fresh_label() {
    static const char* base[] = {"X", "Y", "Z"};
    const std::size_t i = labels_made_++;
    return i < 3 ? base[i] : "X" + std::to_string(i - 2);
  }

  Formula node(std::size_t depth, std::vector<std::string>& scope) {
    if (depth == 0) return atom(scope);
    // 0 atom, 1 |, 2 &, 3 <>, 4 [], 5 mu, 6 nu
    const std::uint64_t pick = rng_.below(fixpoints_left_ > 0 ? 9 : 5);
    switch (pick) {
      case 0:
        return atom(scope);
      case 1:
        return Formula::disj(node(depth - 1, scope), node(depth - 1, scope));
      case 2:
        return Formula::conj(node(depth - 1, scope), node(depth - 1, scope));
      case 3:
        return Formula::diamond(node(depth - 1, scope));
      case 4:
        return Formula::box(node(depth - 1, scope));
      default: {
        --fixpoints_left_;
        const bool least = pick % 2 == 1;
        std::string x = fresh_label();
        scope.push_back(x);
        Formula body = node(depth - 1, scope);
        scope.pop_back();
        return least ? Formula::mu(std::move(x), body) : Formula::nu(std::move(x), body);
      }
    }
  }

  Rng rng_;
  std::vector<std::string> props_;
  std::size_t fixpoints_left_;
  std::size_t labels_made_ = 0;
};

}  // namespace detail

// Closed, normal-form sentence of height <= max_depth with at most
// max_fixpoints binders; deterministic in the seed.
inline Formula random_sentence(std::uint64_t seed, const InstanceParams& params) {
  params.validate();
  return detail::SentenceGenerator(seed, params).generate(params.max_depth);
}

// Sentence in which the same label is bound by several binders, nested or
// side by side, so that normalization has to rename.
inline Formula random_colliding_sentence(std::uint64_t seed, const InstanceParams& params) {
  detail::Rng rng(seed);
  InstanceParams inner = params;
  inner.max_fixpoints = 1;
  inner.max_depth = std::max<std::size_t>(1, params.max_depth > 0 ? params.max_depth - 1 : 0);
  auto component = [&](std::uint64_t s) {
    // Every binder produced by the generator is named X first.
    Formula f = random_sentence(s, inner);
    if (fixpoint_nodes(f).empty()) {
      Formula body = Formula::disj(f, Formula::diamond(Formula::label("X")));
      f = rng.bernoulli(0.5) ? Formula::mu("X", body) : Formula::nu("X", body);
    }
    return f;
  };
  Formula a = component(detail::mix_seed(seed, 1));
  Formula b = component(detail::mix_seed(seed, 2));
  switch (rng.below(3)) {
    case 0:
      return Formula::disj(a, b);
    case 1:
      return Formula::conj(a, b);
    default: {
      // Nest b under a's binder: X inside b is rebound by b's own binder.
      const NodeId binder = fixpoint_nodes(a).front();
      const Formula body = a.subformula(a.child(binder));
      const Formula nested = rng.bernoulli(0.5) ? Formula::conj(body, Formula::diamond(b))
                                                : Formula::disj(body, Formula::box(b));
      return a.replace(a.child(binder), nested);
    }
  }
}

// ---------------------------------------------------------------------------
// Reports

struct StateVerdict {
  std::string state;
  bool gts = false;
  bool bounded = false;
  std::optional<bool> standard;

  bool agrees() const { return gts == bounded && (!standard || *standard == gts); }
};

struct DiffReport {
  std::string check;  // "differential" or "standard_recovery"
  std::string formula;
  std::uint64_t gamma = 0;
  std::size_t state_count = 0;
  std::vector<StateVerdict> states;
  bool pass = false;
  // Filled on mismatch: enough to replay the instance.
  std::optional<nlohmann::json> counterexample;
};

inline nlohmann::json to_json(const DiffReport& r) {
  nlohmann::json j;
  j["check"] = r.check;
  j["instance"] = {{"formula", r.formula}, {"gamma", r.gamma}, {"states", r.state_count}};
  j["verdict"] = r.pass ? "pass" : "fail";
  j["per_state"] = nlohmann::json::array();
  for (const auto& s : r.states) {
    nlohmann::json row = {{"state", s.state}, {"gts", s.gts}, {"bounded", s.bounded}};
    row["standard"] = s.standard ? nlohmann::json(*s.standard) : nlohmann::json(nullptr);
    j["per_state"].push_back(row);
  }
  j["counterexample"] = r.counterexample ? *r.counterexample : nlohmann::json(nullptr);
  return j;
}

inline DiffReport report_from_json(const nlohmann::json& j) {
  DiffReport r;
  r.check = j.at("check").get<std::string>();
  r.formula = j.at("instance").at("formula").get<std::string>();
  r.gamma = j.at("instance").at("gamma").get<std::uint64_t>();
  r.state_count = j.at("instance").at("states").get<std::size_t>();
  r.pass = j.at("verdict").get<std::string>() == "pass";
  for (const auto& row : j.at("per_state")) {
    StateVerdict s{row.at("state").get<std::string>(), row.at("gts").get<bool>(), row.at("bounded").get<bool>(), {}};
    if (!row.at("standard").is_null()) s.standard = row.at("standard").get<bool>();
    r.states.push_back(std::move(s));
  }
  if (!j.at("counterexample").is_null()) r.counterexample = j.at("counterexample");
  return r;
}

namespace detail {

inline DiffReport build_report(std::string check, const KripkeModel& m, const Formula& f, std::uint64_t gamma,
                               const StateSet& gts, const StateSet& bounded, const std::optional<StateSet>& standard) {
  DiffReport r{std::move(check), to_string(f), gamma, m.size(), {}, true, std::nullopt};
  std::optional<std::string> first_bad;
  for (StateIndex w = 0; w < m.size(); ++w) {
    StateVerdict v{m.state_name(w), gts.contains(w), bounded.contains(w), {}};
    if (standard) v.standard = standard->contains(w);
    if (!v.agrees()) {
      r.pass = false;
      if (!first_bad) first_bad = v.state;
    }
    r.states.push_back(std::move(v));
  }
  if (!r.pass)
    r.counterexample = nlohmann::json{
        {"model", model_to_json(m)}, {"formula", r.formula}, {"gamma", gamma}, {"state", *first_bad}};
  return r;
}

}  // namespace detail

// gts_truth against eval_bounded membership on every state.
inline DiffReport differential_check(const KripkeModel& m, const Formula& f, std::uint64_t gamma) {
  if (gamma < 1) throw InvalidArgument("clock bound must be at least 1");
  const Ordinal bound(gamma);
  const StateSet gts = gts_truth_set(m, f, bound);
  const StateSet bounded = eval_bounded(m, to_normal_form(f), bound);
  return detail::build_report("differential", m, f, gamma, gts, bounded, std::nullopt);
}

// Both bounded semantics at bound |W|+1 against the standard semantics.
inline DiffReport standard_recovery_check(const KripkeModel& m, const Formula& f) {
  const std::uint64_t gamma = m.size() + 1;
  const Ordinal bound(gamma);
  const StateSet gts = gts_truth_set(m, f, bound);
  const StateSet bounded = eval_bounded(m, f, bound);
  const StateSet standard = eval_standard(m, f);
  return detail::build_report("standard_recovery", m, f, gamma, gts, bounded, standard);
}

// ---------------------------------------------------------------------------
// Unmemoized oracle

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// Plain minimax over the position tree, with no sharing between positions.
inline Player naive_solve(const GameSpec& g, std::size_t node_budget, std::size_t* nodes_visited = nullptr) {
  std::size_t visited = 0;
  std::function<Player(const Position&)> rec = [&](const Position& pos) -> Player {
    if (++visited > node_budget) throw BudgetExceeded("naive_solve exceeded its node budget");
    const Move move = legal_moves(g, pos);
    if (move.terminal()) return *move.winner;
    const Player mover = *move.chooser;
    for (const auto& opt : move.options)
      if (rec(opt.next) == mover) return mover;
    return opponent(mover);
  };
  const Player w = rec(initial_position(g));
  if (nodes_visited) *nodes_visited = visited;
  return w;
}

// ---------------------------------------------------------------------------
// Ladder invariants

struct LadderCheck {
  bool monotone = true;
  bool stabilized_within_bound = true;  // n* <= |W|
  bool operator_monotone = true;        // A subset A' implies F(A) subset F(A')
};

// Checks chain monotonicity and stabilization of the bounded ladder of
// kind(X).body, and monotonicity of the operator on `pairs` random
// A subset A' pairs.
inline LadderCheck check_ladder(const KripkeModel& m, const Formula& body, const std::string& x, FixpointKind kind,
                                const Ordinal& bound, std::uint64_t seed, std::size_t pairs) {
  LadderCheck out;
  const ApproximantLadder ladder = approximant_ladder(m, body, x, {}, bound, kind);
  for (std::size_t i = 0; i + 1 < ladder.stages.size(); ++i) {
    const StateSet& a = ladder.stages[i];
    const StateSet& b = ladder.stages[i + 1];
    const bool ok = kind == FixpointKind::mu ? a.is_subset_of(b) && a != b : b.is_subset_of(a) && a != b;
    out.monotone = out.monotone && ok;
  }
  const StateSet fp = ladder.fixed_point();
  out.monotone = out.monotone && operator_apply(m, body, x, {}, bound, fp) == fp;
  out.stabilized_within_bound = ladder.stabilization_index() <= m.size();

  detail::Rng rng(seed);
  for (std::size_t k = 0; k < pairs; ++k) {
    StateSet small(m.size());
    StateSet large(m.size());
    for (StateIndex w = 0; w < m.size(); ++w) {
      const bool in_small = rng.bernoulli(0.4);
      if (in_small) small.insert(w);
      if (in_small || rng.bernoulli(0.5)) large.insert(w);
    }
    const StateSet fs = operator_apply(m, body, x, {}, bound, small);
    const StateSet fl = operator_apply(m, body, x, {}, bound, large);
    out.operator_monotone = out.operator_monotone && fs.is_subset_of(fl);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Corpus instances

struct Instance {
  std::uint64_t seed;
  KripkeModel model;
  Formula formula;
  std::uint64_t gamma;
};

inline Instance make_instance(std::uint64_t seed, std::uint64_t index, const InstanceParams& p) {
  p.validate();
  const std::uint64_t s = detail::mix_seed(seed, index);
  detail::Rng rng(s);
  const std::size_t n = static_cast<std::size_t>(rng.between(1, p.max_states));
  const std::uint64_t gamma = rng.between(p.gamma_min, p.gamma_max);
  KripkeModel m = random_model(detail::mix_seed(s, 1), n, p.edge_density, proposition_names(p.prop_count));
  Formula f = random_sentence(detail::mix_seed(s, 2), p);
  return Instance{s, std::move(m), std::move(f), gamma};
}

struct InstanceOutcome {
  bool differential = false;
  bool recovery = false;
  bool determinacy = false;  // one winner per reachable key, winner strategies verified
  std::size_t naive_compared = 0;
  std::size_t naive_agreed = 0;
  std::size_t naive_skipped = 0;  // over budget
  std::size_t moves_checked = 0;
  std::size_t keys = 0;
  bool decrement_policy_agrees = false;
  std::optional<std::string> progress_failure;
  DiffReport diff_report;
  DiffReport recovery_report;

  bool pass() const {
    return differential && recovery && determinacy && naive_agreed == naive_compared && !progress_failure;
  }
};

// Solves every starting state, then checks that every reachable key has a
// winner whose extracted strategy wins from it.
inline bool check_determinacy(const GameSpec& spec, std::size_t* keys = nullptr, std::size_t* moves = nullptr) {
  GameSolver solver(spec);
  for (StateIndex w = 0; w < spec.model().size(); ++w) solver.winner_from(w);
  const SolveResult r = solver.result(initial_position(spec));
  StrategyVerifier eloise(spec, Player::eloise, r.eloise);
  StrategyVerifier abelard(spec, Player::abelard, r.abelard);
  for (const auto& [key, pos] : r.representatives) {
    const Player p = r.winners.at(key);
    if (!(p == Player::eloise ? eloise : abelard).verify(pos).all_won) return false;
  }
  if (keys) *keys = r.winners.size();
  if (moves) *moves = r.stats.moves_checked;
  return r.winners.size() == r.representatives.size();
}

inline InstanceOutcome check_instance(const Instance& inst, const InstanceParams& p) {
  InstanceOutcome out;
  try {
    out.diff_report = differential_check(inst.model, inst.formula, inst.gamma);
    out.differential = out.diff_report.pass;
    out.recovery_report = standard_recovery_check(inst.model, inst.formula);
    out.recovery = out.recovery_report.pass;

    const GameSpec spec(inst.model, inst.formula, Ordinal(inst.gamma), 0);
    out.determinacy = check_determinacy(spec, &out.keys, &out.moves_checked);

    GameSolver solver(spec);
    for (StateIndex w = 0; w < inst.model.size(); ++w) {
      const GameSpec at = spec.with_initial_state(w);
      try {
        const Player naive = naive_solve(at, p.naive_budget);
        ++out.naive_compared;
        if (naive == solver.winner_from(w)) ++out.naive_agreed;
      } catch (const BudgetExceeded&) {
        ++out.naive_skipped;
      }
    }
    out.decrement_policy_agrees =
        gts_truth_set(inst.model, inst.formula, Ordinal(inst.gamma), ChoicePolicy::decrement_by_one) ==
        gts_truth_set(inst.model, inst.formula, Ordinal(inst.gamma));
  } catch (const ProgressViolation& e) {
    out.progress_failure = e.what();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shrinking

namespace detail {

inline KripkeModel drop_state(const KripkeModel& m, StateIndex gone) {
  std::vector<std::string> names;
  std::vector<StateIndex> remap(m.size(), 0);
  for (StateIndex w = 0; w < m.size(); ++w) {
    if (w == gone) continue;
    remap[w] = names.size();
    names.push_back(m.state_name(w));
  }
  std::vector<KripkeModel::Edge> edges;
  for (const auto& [a, b] : m.edges())
    if (a != gone && b != gone) edges.emplace_back(remap[a], remap[b]);
  std::map<std::string, std::vector<StateIndex>> val;
  for (const auto& [prop, set] : m.valuation_map()) {
    auto& members = val[prop];
    for (StateIndex w : set.indices())
      if (w != gone) members.push_back(remap[w]);
  }
  return KripkeModel(std::move(names), edges, std::move(val));
}

// Candidate simplifications of a sentence that stay closed: replace a
// subformula by one of its closed children or by a proposition.
inline std::vector<Formula> simpler_sentences(const Formula& f, const std::string& prop) {
  std::vector<Formula> out;
  for (NodeId id = 0; id < f.size(); ++id) {
    if (is_atom(f.kind(id))) continue;
    for (NodeId c : f.children(id)) {
      Formula g = f.replace(id, f.subformula(c));
      if (is_sentence(g)) out.push_back(std::move(g));
    }
    Formula g = f.replace(id, Formula::prop(prop));
    if (is_sentence(g)) out.push_back(std::move(g));
  }
  return out;
}

}  // namespace detail

// Greedy shrinking: fewer states, then a smaller sentence, then a smaller
// bound, as long as `fails` still holds. The result still fails.
inline Instance shrink(Instance inst, const std::function<bool(const Instance&)>& fails) {
  bool progress = true;
  while (progress) {
    progress = false;
    for (StateIndex w = 0; w < inst.model.size() && inst.model.size() > 1 && !progress; ++w) {
      Instance cand = inst;
      cand.model = detail::drop_state(inst.model, w);
      if (fails(cand)) {
        inst = std::move(cand);
        progress = true;
      }
    }
    if (progress) continue;
    const std::string prop = inst.model.valuation_map().empty() ? "p" : inst.model.valuation_map().begin()->first;
    for (Formula& g : detail::simpler_sentences(inst.formula, prop)) {
      Instance cand = inst;
      cand.formula = std::move(g);
      if (fails(cand)) {
        inst = std::move(cand);
        progress = true;
        break;
      }
    }
    if (progress) continue;
    if (inst.gamma > 1) {
      Instance cand = inst;
      --cand.gamma;
      if (fails(cand)) {
        inst = std::move(cand);
        progress = true;
      }
    }
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Corpus driver

struct CorpusSummary {
  std::size_t instances = 0;
  std::size_t passed = 0;
  std::size_t differential_passed = 0;
  std::size_t recovery_passed = 0;
  std::size_t determinacy_passed = 0;
  std::size_t naive_compared = 0;
  std::size_t naive_agreed = 0;
  std::size_t naive_skipped = 0;
  std::size_t moves_checked = 0;
  std::size_t progress_failures = 0;
  std::size_t decrement_policy_agreed = 0;
  // Shrunk counterexamples for the first failing instances.
  std::vector<nlohmann::json> failures;
};

inline nlohmann::json to_json(const CorpusSummary& s) {
  return {{"instances", s.instances},
          {"passed", s.passed},
          {"differential_passed", s.differential_passed},
          {"recovery_passed", s.recovery_passed},
          {"determinacy_passed", s.determinacy_passed},
          {"naive_compared", s.naive_compared},
          {"naive_agreed", s.naive_agreed},
          {"naive_skipped", s.naive_skipped},
          {"moves_checked", s.moves_checked},
          {"progress_failures", s.progress_failures},
          {"decrement_policy_agreed", s.decrement_policy_agreed},
          {"failures", s.failures}};
}

// Checks `count` instances derived from `seed`, on up to `jobs` threads. The
// summary depends only on (seed, count, params).
inline CorpusSummary run_corpus(std::uint64_t seed, std::size_t count, const InstanceParams& params,
                                std::size_t jobs = 1) {
  params.validate();
  std::vector<std::optional<InstanceOutcome>> outcomes(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;)
      outcomes[i] = check_instance(make_instance(seed, i, params), params);
  };
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  CorpusSummary s;
  s.instances = count;
  for (std::size_t i = 0; i < count; ++i) {
    const InstanceOutcome& o = *outcomes[i];
    s.passed += o.pass();
    s.differential_passed += o.differential;
    s.recovery_passed += o.recovery;
    s.determinacy_passed += o.determinacy;
    s.naive_compared += o.naive_compared;
    s.naive_agreed += o.naive_agreed;
    s.naive_skipped += o.naive_skipped;
    s.moves_checked += o.moves_checked;
    s.progress_failures += o.progress_failure.has_value();
    s.decrement_policy_agreed += o.decrement_policy_agrees;
    if (!o.pass() && s.failures.size() < 3) {
      const Instance minimal = shrink(make_instance(seed, i, params), [&](const Instance& c) {
        return !check_instance(c, params).pass();
      });
      s.failures.push_back({{"index", i},
                            {"model", model_to_json(minimal.model)},
                            {"formula", to_string(minimal.formula)},
                            {"gamma", minimal.gamma}});
    }
  }
  return s;
}

}  // namespace mucalc
