#pragma once

// Closed-form continuation moments for a few fixed chains, summed path by
// path as geometric series. They share no code with the linear-system
// engine and serve as independent checks of it.
//
// Each function returns {E_x[Y], E_x[Y^2]} pairs for the two transient states
// (or the single one) under eta = (a, b) on those states.

#include <array>

namespace tcstop::closed_form {

/// States {0,1,3,6,10}, 1 -> (0 .2, 3 .4, 6 .2, 10 .2), 6 -> (1 .2, 10 .8).
/// Returns {E_1, E2_1, E_6, E2_6}; undefined at a = b = 0.
std::array<double, 4> cycle_0_1_3_6_10(double a, double b);

/// Same transitions with values {0,1,2,7,9}. Returns {E_1, E2_1, E_7, E2_7}.
std::array<double, 4> cycle_0_1_2_7_9(double a, double b);

/// States {0,11,17,18}, 11 -> (0 .1, 11 .7, 18 .2), 17 -> (11 .1, 17 .1, 18 .8).
/// Returns {E_11, E2_11, E_17, E2_17}.
std::array<double, 4> chain_0_11_17_18(double a, double b);

/// States {0,1,4}, 1 -> (0 .1, 1 .8, 4 .1). Returns {E_1, E2_1}.
std::array<double, 2> chain_0_1_4(double a);

}  // namespace tcstop::closed_form
