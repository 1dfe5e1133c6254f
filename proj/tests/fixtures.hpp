#pragma once

#include "mucalc/kripke.hpp"

namespace fixtures {

// w0 -> w1 -> w2, p true at w2 only.
inline mucalc::KripkeModel chain() { return mucalc::KripkeModel({"w0", "w1", "w2"}, {{0, 1}, {1, 2}}, {{"p", {2}}}); }

// Same chain with p true everywhere.
inline mucalc::KripkeModel chain_all_p() {
  return mucalc::KripkeModel({"w0", "w1", "w2"}, {{0, 1}, {1, 2}}, {{"p", {0, 1, 2}}});
}

// u0 <-> u1, p true at both.
inline mucalc::KripkeModel two_cycle() { return mucalc::KripkeModel({"u0", "u1"}, {{0, 1}, {1, 0}}, {{"p", {0, 1}}}); }

inline mucalc::KripkeModel single(bool p) {
  return p ? mucalc::KripkeModel({"s"}, {}, {{"p", {0}}}) : mucalc::KripkeModel({"s"}, {}, {});
}

}  // namespace fixtures
