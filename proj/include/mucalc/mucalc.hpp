#pragma once

#include "mucalc/error.hpp"
#include "mucalc/formula.hpp"
#include "mucalc/game.hpp"
#include "mucalc/harness.hpp"
#include "mucalc/kripke.hpp"
#include "mucalc/ordinal.hpp"
#include "mucalc/semantics.hpp"
#include "mucalc/state_set.hpp"
