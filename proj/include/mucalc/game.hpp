#pragma once

// Bounded evaluation games.
//
// A position (w, phi, c) pairs a state, an occurrence of the (normalized)
// root sentence and a clock mapping c over its mu/nu occurrences. Eloise
// moves at disjunctions, diamonds and mu-binders and lowers mu clocks at
// labels; Abelard does the dual. At a label X with c(rf(X)) = 0 the owner of
// the clock loses. Announcements and lowered clocks are strictly below their
// bound, so every play is finite.
//
// Only finite clock bounds are supported: the announce rule quantifies over
// all gamma < bound, which the engine enumerates.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mucalc/error.hpp"
#include "mucalc/formula.hpp"
#include "mucalc/kripke.hpp"
#include "mucalc/ordinal.hpp"

namespace mucalc {

enum class Player { eloise, abelard };

constexpr Player opponent(Player p) noexcept { return p == Player::eloise ? Player::abelard : Player::eloise; }
inline const char* to_string(Player p) { return p == Player::eloise ? "Eloise" : "Abelard"; }

using Clock = std::uint64_t;
// Clock value per mu/nu occurrence, indexed by the occurrence's slot (its
// rank among the fixpoint occurrences in preorder).
using ClockMap = std::vector<Clock>;

// A violated move-progress check; never expected to fire.
class ProgressViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A choice source picked a move that is not available.
class IllegalChoice : public Error {
 public:
  using Error::Error;
};

struct Position {
  StateIndex state = 0;
  NodeId node = 0;
  ClockMap clocks;

  friend bool operator==(const Position&, const Position&) = default;
};

enum class ChoiceKind : std::uint8_t {
  branch,     // operand of | or &: 0 = left, 1 = right
  successor,  // target state of <> or []
  announce,   // clock value announced at a mu/nu binder
  lower,      // new clock value chosen at a label
};

struct Choice {
  ChoiceKind kind;
  std::uint64_t value;

  friend bool operator==(const Choice&, const Choice&) = default;
};

struct Move {
  struct Option {
    Choice choice;
    Position next;
  };

  std::optional<Player> chooser;  // empty for ending positions
  std::vector<Option> options;
  std::optional<Player> winner;  // set exactly for ending positions

  bool terminal() const noexcept { return winner.has_value(); }
};

// Memoization key: the part of a position that determines its subgame. Clocks
// of mu/nu occurrences off the root-to-node branch are overwritten by an
// announcement before they can be read, and so is the clock of the node
// itself when it is a binder; only strict ancestors matter.
struct Key {
  StateIndex state;
  NodeId node;
  std::vector<Clock> clocks;

  friend bool operator==(const Key&, const Key&) = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::size_t h = std::hash<std::size_t>{}(k.state) * 0x9E3779B97F4A7C15ull ^ k.node;
    for (Clock c : k.clocks) h = (h ^ std::hash<Clock>{}(c)) * 0x100000001B3ull;
    return h;
  }
};

// (M, w0, phi0, bound). The sentence is put in normal form on construction.
class GameSpec {
 public:
  GameSpec(KripkeModel model, const Formula& sentence, const Ordinal& bound, StateIndex initial_state)
      : model_(std::make_shared<const KripkeModel>(std::move(model))),
        formula_(to_normal_form(sentence)),
        initial_state_(initial_state) {
    if (!is_sentence(sentence)) throw InvalidArgument("evaluation games are defined for sentences only");
    if (bound.is_zero()) throw InvalidArgument("clock bound must be at least 1");
    const auto finite = bound.to_finite();
    if (!finite) throw InvalidArgument("evaluation games require a finite clock bound, got " + bound.to_string());
    bound_ = *finite;
    if (initial_state_ >= model_->size()) throw InvalidArgument("initial state out of range");
    index_formula();
  }

  const KripkeModel& model() const noexcept { return *model_; }
  const Formula& formula() const noexcept { return formula_; }
  Clock bound() const noexcept { return bound_; }
  StateIndex initial_state() const noexcept { return initial_state_; }

  GameSpec with_initial_state(StateIndex w) const {
    if (w >= model_->size()) throw InvalidArgument("initial state out of range");
    GameSpec g = *this;
    g.initial_state_ = w;
    return g;
  }

  std::size_t slot_count() const noexcept { return fixpoints_.size(); }
  NodeId slot_node(std::size_t slot) const { return fixpoints_.at(slot); }
  std::size_t slot_of(NodeId binder) const { return slot_of_.at(binder); }

  // rf(X) of a label node.
  NodeId reference(NodeId label) const { return reference_.at(label); }

  // Slots of the strict mu/nu ancestors of a node, outermost first.
  const std::vector<std::size_t>& ancestor_slots(NodeId id) const { return ancestors_.at(id); }

  // Slots of the mu/nu occurrences strictly inside a binder.
  const std::vector<std::size_t>& inner_slots(NodeId binder) const { return inner_.at(binder); }

  // Largest number of mu/nu occurrences on one branch.
  std::size_t max_nesting() const noexcept { return max_nesting_; }

 private:
  void index_formula() {
    const Formula& f = formula_;
    fixpoints_ = fixpoint_nodes(f);
    slot_of_.assign(f.size(), std::numeric_limits<std::size_t>::max());
    for (std::size_t i = 0; i < fixpoints_.size(); ++i) slot_of_[fixpoints_[i]] = i;
    reference_.assign(f.size(), no_node);
    ancestors_.assign(f.size(), {});
    inner_.assign(f.size(), {});
    max_nesting_ = 0;
    for (NodeId id = 0; id < f.size(); ++id) {
      if (f.kind(id) == NodeKind::label) reference_[id] = binder_of(f, id);
      const NodeId p = f.parent(id);
      if (p != no_node) {
        ancestors_[id] = ancestors_[p];
        if (is_fixpoint(f.kind(p))) ancestors_[id].push_back(slot_of_[p]);
      }
      max_nesting_ = std::max(max_nesting_, ancestors_[id].size() + (is_fixpoint(f.kind(id)) ? 1 : 0));
    }
    for (NodeId b : fixpoints_)
      for (NodeId id : fixpoints_)
        if (id != b && f.is_ancestor(b, id)) inner_[b].push_back(slot_of_[id]);
  }

  std::shared_ptr<const KripkeModel> model_;
  Formula formula_;
  Clock bound_ = 1;
  StateIndex initial_state_;
  std::vector<NodeId> fixpoints_;
  std::vector<std::size_t> slot_of_;
  std::vector<NodeId> reference_;
  std::vector<std::vector<std::size_t>> ancestors_;
  std::vector<std::vector<std::size_t>> inner_;
  std::size_t max_nesting_ = 0;
};

// (w0, phi0, c0) with every clock at the bound.
inline Position initial_position(const GameSpec& g) {
  return Position{g.initial_state(), g.formula().root(), ClockMap(g.slot_count(), g.bound())};
}

inline void require_valid(const GameSpec& g, const Position& pos) {
  if (pos.state >= g.model().size()) throw InvalidArgument("position state out of range");
  if (pos.node >= g.formula().size()) throw InvalidArgument("position formula occurrence out of range");
  if (pos.clocks.size() != g.slot_count()) throw InvalidArgument("clock mapping has the wrong domain");
  for (Clock c : pos.clocks)
    if (c > g.bound()) throw InvalidArgument("clock value exceeds the bound");
}

// The rule table: ending positions carry their winner, all others the
// chooser and every legal option.
inline Move legal_moves(const GameSpec& g, const Position& pos) {
  require_valid(g, pos);
  const Formula& f = g.formula();
  const KripkeModel& m = g.model();
  const NodeId id = pos.node;
  Move move;
  auto ending = [&](Player winner) {
    move.winner = winner;
    return move;
  };
  auto to = [&](StateIndex w, NodeId node, ClockMap clocks) { return Position{w, node, std::move(clocks)}; };

  switch (f.kind(id)) {
    case NodeKind::prop:
      return ending(m.valuation(f.symbol(id)).contains(pos.state) ? Player::eloise : Player::abelard);
    case NodeKind::neg_prop:
      return ending(m.valuation(f.symbol(id)).contains(pos.state) ? Player::abelard : Player::eloise);
    case NodeKind::disj:
    case NodeKind::conj:
      move.chooser = f.kind(id) == NodeKind::disj ? Player::eloise : Player::abelard;
      for (std::uint64_t i = 0; i < 2; ++i)
        move.options.push_back({{ChoiceKind::branch, i}, to(pos.state, f.child(id, i), pos.clocks)});
      return move;
    case NodeKind::diamond:
    case NodeKind::box: {
      const bool diamond = f.kind(id) == NodeKind::diamond;
      const auto succ = m.successor_indices(pos.state);
      if (succ.empty()) return ending(diamond ? Player::abelard : Player::eloise);
      move.chooser = diamond ? Player::eloise : Player::abelard;
      for (StateIndex v : succ) move.options.push_back({{ChoiceKind::successor, v}, to(v, f.child(id), pos.clocks)});
      return move;
    }
    case NodeKind::mu:
    case NodeKind::nu: {
      move.chooser = f.kind(id) == NodeKind::mu ? Player::eloise : Player::abelard;
      const std::size_t slot = g.slot_of(id);
      for (Clock gamma = 0; gamma < g.bound(); ++gamma) {
        ClockMap c = pos.clocks;
        c[slot] = gamma;
        move.options.push_back({{ChoiceKind::announce, gamma}, to(pos.state, f.child(id), std::move(c))});
      }
      return move;
    }
    case NodeKind::label: {
      const NodeId ref = g.reference(id);
      const bool least = f.kind(ref) == NodeKind::mu;
      const Player owner = least ? Player::eloise : Player::abelard;
      const std::size_t slot = g.slot_of(ref);
      const Clock gamma = pos.clocks[slot];
      if (gamma == 0) return ending(opponent(owner));
      move.chooser = owner;
      for (Clock lowered = 0; lowered < gamma; ++lowered) {
        ClockMap c = pos.clocks;
        c[slot] = lowered;
        for (std::size_t inner : g.inner_slots(ref)) c[inner] = g.bound();
        move.options.push_back({{ChoiceKind::lower, lowered}, to(pos.state, f.child(ref), std::move(c))});
      }
      return move;
    }
  }
  throw InvalidArgument("unknown node kind");
}

inline Key canonical_key(const GameSpec& g, const Position& pos) {
  Key k{pos.state, pos.node, {}};
  for (std::size_t slot : g.ancestor_slots(pos.node)) k.clocks.push_back(pos.clocks.at(slot));
  return k;
}

// Clocks of the strict mu/nu ancestors (outermost first), padded with the
// bound up to the maximal nesting, followed by the syntactic height of the
// node. Every move strictly decreases it lexicographically.
using ProgressMeasure = std::vector<Clock>;

inline ProgressMeasure progress_measure(const GameSpec& g, const Position& pos) {
  ProgressMeasure pm;
  pm.reserve(g.max_nesting() + 1);
  for (std::size_t slot : g.ancestor_slots(pos.node)) pm.push_back(pos.clocks.at(slot));
  pm.resize(g.max_nesting(), g.bound());
  pm.push_back(g.formula().height(pos.node));
  return pm;
}

// ---------------------------------------------------------------------------
// Rendering

inline std::string describe(const GameSpec& g, const ClockMap& c) {
  std::string out = "{";
  for (std::size_t slot = 0; slot < c.size(); ++slot) {
    if (slot) out += ", ";
    out += g.formula().symbol(g.slot_node(slot)) + ":" + std::to_string(c[slot]);
  }
  return out + "}";
}

inline std::string describe(const GameSpec& g, const Position& pos) {
  return "(" + g.model().state_name(pos.state) + ", " + to_string(g.formula().subformula(pos.node)) + ", " +
         describe(g, pos.clocks) + ")";
}

inline std::string describe(const GameSpec& g, const Choice& c) {
  switch (c.kind) {
    case ChoiceKind::branch:
      return c.value == 0 ? "left" : "right";
    case ChoiceKind::successor:
      return g.model().state_name(static_cast<StateIndex>(c.value));
    case ChoiceKind::announce:
      return "announce " + std::to_string(c.value);
    case ChoiceKind::lower:
      return "lower to " + std::to_string(c.value);
  }
  return "?";
}

inline std::string describe_legal(const GameSpec& g, const Move& move) {
  std::string out = "{";
  for (std::size_t i = 0; i < move.options.size(); ++i) {
    if (i) out += ", ";
    const Choice& c = move.options[i].choice;
    out += c.kind == ChoiceKind::announce || c.kind == ChoiceKind::lower ? std::to_string(c.value) : describe(g, c);
  }
  return out + "}";
}

// ---------------------------------------------------------------------------
// Solving

using Strategy = std::unordered_map<Key, Choice, KeyHash>;

enum class ChoicePolicy {
  full,              // every legal announcement and lowering
  decrement_by_one,  // announce bound-1, lower gamma to gamma-1 (optimization, not the reference)
};

struct SolveStats {
  std::size_t positions_explored = 0;  // distinct keys
  std::size_t max_play_length = 0;     // longest play (in rounds) through explored keys
  std::size_t moves_checked = 0;       // moves whose progress measure was verified
};

struct SolveResult {
  Player winner;  // at the initial position
  std::unordered_map<Key, Player, KeyHash> winners;
  Strategy eloise;
  Strategy abelard;
  std::unordered_map<Key, Position, KeyHash> representatives;  // one position per key
  SolveStats stats;

  const Strategy& strategy(Player p) const { return p == Player::eloise ? eloise : abelard; }
};

// Memoized backward induction over canonical keys. One solver may be queried
// from many positions of the same game; the memo is shared between queries.
class GameSolver {
 public:
  explicit GameSolver(GameSpec spec, ChoicePolicy policy = ChoicePolicy::full)
      : spec_(std::move(spec)), policy_(policy) {}

  const GameSpec& spec() const noexcept { return spec_; }

  Player winner(const Position& pos) { return visit(pos).winner; }

  // Winner of the game started at state w.
  Player winner_from(StateIndex w) { return winner(initial_position(spec_.with_initial_state(w))); }

  SolveResult result(const Position& root) {
    const Entry& e = visit(root);
    SolveResult r{e.winner, {}, {}, {}, {}, stats_};
    for (const auto& [key, entry] : memo_) {
      r.winners.emplace(key, entry.winner);
      r.representatives.emplace(key, entry.position);
      if (entry.chooser) (*entry.chooser == Player::eloise ? r.eloise : r.abelard).emplace(key, *entry.choice);
    }
    r.stats.max_play_length = e.height;
    return r;
  }

  const SolveStats& stats() const noexcept { return stats_; }

 private:
  struct Entry {
    Player winner;
    std::optional<Player> chooser;
    std::optional<Choice> choice;
    std::size_t height;
    Position position;
  };

  bool admitted(const Choice& c, const Position& pos) const {
    if (policy_ == ChoicePolicy::full) return true;
    if (c.kind == ChoiceKind::announce) return c.value + 1 == spec_.bound();
    if (c.kind == ChoiceKind::lower) {
      const NodeId ref = spec_.reference(pos.node);
      return c.value + 1 == pos.clocks[spec_.slot_of(ref)];
    }
    return true;
  }

  const Entry& visit(const Position& pos) {
    Key key = canonical_key(spec_, pos);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const Move move = legal_moves(spec_, pos);
    Entry e{Player::eloise, move.chooser, std::nullopt, 0, pos};
    if (move.terminal()) {
      e.winner = *move.winner;
    } else {
      const Player mover = *move.chooser;
      const ProgressMeasure here = progress_measure(spec_, pos);
      bool mover_wins = false;
      for (const auto& opt : move.options) {
        if (!admitted(opt.choice, pos)) continue;
        ++stats_.moves_checked;
        if (!(progress_measure(spec_, opt.next) < here))
          throw ProgressViolation("progress measure did not decrease at " + describe(spec_, pos));
        const Entry& child = visit(opt.next);
        e.height = std::max(e.height, child.height + 1);
        if (!e.choice) e.choice = opt.choice;
        if (child.winner == mover && !mover_wins) {
          mover_wins = true;
          e.choice = opt.choice;
        }
      }
      e.winner = mover_wins ? mover : opponent(mover);
    }
    ++stats_.positions_explored;
    stats_.max_play_length = std::max(stats_.max_play_length, e.height);
    return memo_.emplace(std::move(key), std::move(e)).first->second;
  }

  GameSpec spec_;
  ChoicePolicy policy_;
  std::unordered_map<Key, Entry, KeyHash> memo_;
  SolveStats stats_;
};

inline SolveResult solve(const GameSpec& g, ChoicePolicy policy = ChoicePolicy::full) {
  GameSolver solver(g, policy);
  return solver.result(initial_position(g));
}

// M, w ||-^bound f: Eloise wins the bounded evaluation game from w.
inline bool gts_truth(const KripkeModel& m, StateIndex w, const Formula& f, const Ordinal& bound) {
  GameSpec g(m, f, bound, w);
  return solve(g).winner == Player::eloise;
}

// The states where Eloise wins, sharing one memo across all starting states.
inline StateSet gts_truth_set(const KripkeModel& m, const Formula& f, const Ordinal& bound,
                              ChoicePolicy policy = ChoicePolicy::full) {
  GameSolver solver(GameSpec(m, f, bound, 0), policy);
  StateSet out(m.size());
  for (StateIndex w = 0; w < m.size(); ++w)
    if (solver.winner_from(w) == Player::eloise) out.insert(w);
  return out;
}

// ---------------------------------------------------------------------------
// Strategy verification

struct VerificationReport {
  enum class Failure { none, lost, undefined, illegal };

  bool all_won = false;
  Failure failure = Failure::none;
  std::size_t max_play_length = 0;
  std::size_t positions_checked = 0;
  // The offending play from the start position, when verification fails.
  std::vector<Position> counterexample;
  std::string message;
};

// Explores every play consistent with `strategy` for `player` from a
// position. Results are memoized per canonical key, so a verifier can be
// reused across start positions of the same game.
class StrategyVerifier {
 public:
  StrategyVerifier(const GameSpec& g, Player player, const Strategy& strategy)
      : g_(g), player_(player), strategy_(strategy) {}

  VerificationReport verify(const Position& start) {
    VerificationReport report;
    std::vector<Position> play;
    const auto height = explore(start, play, report);
    if (height) {
      report.all_won = true;
      report.max_play_length = *height;
    }
    report.positions_checked = good_.size();
    return report;
  }

 private:
  std::optional<std::size_t> explore(const Position& pos, std::vector<Position>& play, VerificationReport& report) {
    Key key = canonical_key(g_, pos);
    if (auto it = good_.find(key); it != good_.end()) return it->second;
    play.push_back(pos);
    auto fail = [&](VerificationReport::Failure why, std::string message) -> std::optional<std::size_t> {
      report.failure = why;
      report.counterexample = play;
      report.message = std::move(message);
      return std::nullopt;
    };

    const Move move = legal_moves(g_, pos);
    std::size_t height = 0;
    if (move.terminal()) {
      if (*move.winner != player_)
        return fail(VerificationReport::Failure::lost, std::string(to_string(*move.winner)) + " wins at " + describe(g_, pos));
    } else {
      const ProgressMeasure here = progress_measure(g_, pos);
      std::vector<const Move::Option*> followed;
      if (*move.chooser == player_) {
        auto it = strategy_.find(key);
        if (it == strategy_.end())
          return fail(VerificationReport::Failure::undefined, "strategy undefined at " + describe(g_, pos));
        auto opt = std::find_if(move.options.begin(), move.options.end(),
                                [&](const Move::Option& o) { return o.choice == it->second; });
        if (opt == move.options.end())
          return fail(VerificationReport::Failure::illegal,
                      "strategy choice " + describe(g_, it->second) + " is illegal at " + describe(g_, pos));
        followed.push_back(&*opt);
      } else {
        for (const auto& o : move.options) followed.push_back(&o);
      }
      for (const Move::Option* o : followed) {
        if (!(progress_measure(g_, o->next) < here))
          throw ProgressViolation("progress measure did not decrease at " + describe(g_, pos));
        const auto h = explore(o->next, play, report);
        if (!h) return std::nullopt;
        height = std::max(height, *h + 1);
      }
    }
    play.pop_back();
    good_.emplace(std::move(key), height);
    return height;
  }

  const GameSpec& g_;
  Player player_;
  const Strategy& strategy_;
  std::unordered_map<Key, std::size_t, KeyHash> good_;
};

inline VerificationReport verify_strategy(const GameSpec& g, Player player, const Strategy& strategy) {
  return StrategyVerifier(g, player, strategy).verify(initial_position(g));
}

// ---------------------------------------------------------------------------
// Plays

// Picks the chooser's option at a non-ending position.
using ChoiceSource = std::function<Choice(const GameSpec&, const Position&, const Move&)>;

inline ChoiceSource strategy_source(Strategy strategy) {
  return [s = std::move(strategy)](const GameSpec& g, const Position& pos, const Move&) {
    auto it = s.find(canonical_key(g, pos));
    if (it == s.end()) throw IllegalChoice("strategy undefined at " + describe(g, pos));
    return it->second;
  };
}

// Reads a choice from a token: "left"/"right" at | and &, a state id at <>
// and [], a natural number at binders and labels.
inline Choice parse_choice(const GameSpec& g, const Move& move, const std::string& token) {
  if (move.options.empty()) throw IllegalChoice("no choice at an ending position");
  const ChoiceKind kind = move.options.front().choice.kind;
  switch (kind) {
    case ChoiceKind::branch:
      if (token == "left" || token == "0") return {kind, 0};
      if (token == "right" || token == "1") return {kind, 1};
      break;
    case ChoiceKind::successor:
      if (g.model().has_state(token)) return {kind, g.model().index_of(token)};
      break;
    case ChoiceKind::announce:
    case ChoiceKind::lower:
      if (!token.empty() && std::all_of(token.begin(), token.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        try {
          return {kind, std::stoull(token)};
        } catch (const std::out_of_range&) {
        }
      }
      break;
  }
  throw IllegalChoice("cannot read choice '" + token + "'; legal: " + describe_legal(g, move));
}

// Consumes whitespace-separated tokens in order.
inline ChoiceSource script_source(std::vector<std::string> tokens) {
  auto state = std::make_shared<std::pair<std::vector<std::string>, std::size_t>>(std::move(tokens), 0);
  return [state](const GameSpec& g, const Position& pos, const Move& move) {
    auto& [toks, next] = *state;
    if (next >= toks.size()) throw IllegalChoice("script exhausted at " + describe(g, pos));
    return parse_choice(g, move, toks[next++]);
  };
}

// Reads tokens from a stream, optionally prompting.
inline ChoiceSource stream_source(std::istream& in, std::ostream* prompt = nullptr) {
  return [&in, prompt](const GameSpec& g, const Position& pos, const Move& move) {
    if (prompt) *prompt << describe(g, pos) << " choose " << describe_legal(g, move) << ": " << std::flush;
    std::string token;
    if (!(in >> token)) throw IllegalChoice("input ended at " + describe(g, pos));
    return parse_choice(g, move, token);
  };
}

struct Transcript {
  struct Round {
    Position position;
    std::optional<Player> chooser;
    std::optional<Choice> choice;
  };

  std::vector<Round> rounds;  // the last round is the ending position
  Player winner;

  // Number of moves made.
  std::size_t length() const noexcept { return rounds.empty() ? 0 : rounds.size() - 1; }
};

inline Transcript play(const GameSpec& g, const ChoiceSource& eloise, const ChoiceSource& abelard) {
  Transcript t{{}, Player::eloise};
  Position pos = initial_position(g);
  for (;;) {
    const Move move = legal_moves(g, pos);
    if (move.terminal()) {
      t.rounds.push_back({pos, std::nullopt, std::nullopt});
      t.winner = *move.winner;
      return t;
    }
    const Player mover = *move.chooser;
    const Choice c = (mover == Player::eloise ? eloise : abelard)(g, pos, move);
    auto opt = std::find_if(move.options.begin(), move.options.end(),
                            [&](const Move::Option& o) { return o.choice == c; });
    if (opt == move.options.end())
      throw IllegalChoice(std::string("illegal choice ") + describe(g, c) + " by " + to_string(mover) + " at " +
                          describe(g, pos) + "; legal: " + describe_legal(g, move));
    if (!(progress_measure(g, opt->next) < progress_measure(g, pos)))
      throw ProgressViolation("progress measure did not decrease at " + describe(g, pos));
    t.rounds.push_back({pos, mover, c});
    pos = opt->next;
  }
}

// ---------------------------------------------------------------------------
// Game tree export

// DOT digraph of the game tree, expanded breadth-first. Node ids follow
// discovery order; nodes left unexpanded once max_nodes is reached are drawn
// dashed and marked "truncated".
inline std::string export_game_tree(const GameSpec& g, std::size_t max_nodes) {
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '\n') {
        out += "\\n";
        continue;
      }
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  };

  std::ostringstream dot;
  dot << "digraph game_tree {\n  node [shape=box, fontname=\"monospace\"];\n";
  std::deque<std::pair<std::size_t, Position>> queue;
  std::size_t next_id = 0;
  std::size_t truncated = 0;
  auto emit_node = [&](const Position& pos, bool expand) {
    const std::size_t id = next_id++;
    std::string label = describe(g, pos);
    std::string attrs;
    if (expand) {
      const Move move = legal_moves(g, pos);
      if (move.terminal()) {
        label += "\n" + std::string(to_string(*move.winner)) + " wins";
        attrs = move.winner == Player::eloise ? ", style=filled, fillcolor=palegreen" : ", style=filled, fillcolor=lightpink";
      }
    } else {
      label += "\ntruncated";
      attrs = ", style=dashed";
      ++truncated;
    }
    dot << "  n" << id << " [label=" << quote(label) << attrs << "];\n";
    return id;
  };

  if (max_nodes == 0) {
    dot << "  // truncated: max_nodes = 0\n}\n";
    return dot.str();
  }
  const Position root = initial_position(g);
  queue.emplace_back(emit_node(root, true), root);
  std::ostringstream edges;
  while (!queue.empty()) {
    auto [id, pos] = std::move(queue.front());
    queue.pop_front();
    const Move move = legal_moves(g, pos);
    if (move.terminal()) continue;
    const char* who = *move.chooser == Player::eloise ? "E" : "A";
    for (const auto& opt : move.options) {
      const bool expand = next_id < max_nodes;
      const std::size_t child = emit_node(opt.next, expand);
      edges << "  n" << id << " -> n" << child << " [label=" << quote(std::string(who) + ": " + describe(g, opt.choice))
            << "];\n";
      if (expand) queue.emplace_back(child, opt.next);
    }
  }
  dot << edges.str();
  if (truncated) dot << "  // truncated: " << truncated << " unexpanded nodes\n";
  dot << "}\n";
  return dot.str();
}

}  // namespace mucalc
