#pragma once

// Mean-variance (E - c Var) counterparts of the stopping and liquidation
// machinery.
//
// The liquidation equilibrium here asks only that no single-visit change of
// the sold fraction improves E - c Var of the whole payoff. The remaining
// fraction is not part of the state, so this is weaker than a subgame
// perfect notion; it is the definition the comparisons with the
// mean-standard deviation solver rely on.

#include <vector>

#include "tcstop/equilibrium.hpp"
#include "tcstop/liquidation.hpp"
#include "tcstop/pure_stopping.hpp"
#include "tcstop/randomized.hpp"

namespace tcstop {

struct MvEvaluation {
  StateIndex start = 0;
  double mean = 0.0;
  double variance = 0.0;
  double j_value = 0.0;
};

MvEvaluation evaluate_region_mv(const MarkovModel& model, StateIndex start,
                                const StoppingRegion& region, HitFrom from);
/// J_r(x, q (x) p).
MvEvaluation evaluate_K_r_mv(const MarkovModel& model, StateIndex start, double q,
                             const RandomizedStrategy& strategy);
/// J_l(x, xi (x) eta) = -cV xi^2 + (2cV - E + v) xi + E - cV with E, V the
/// mean and variance of the continuation payoff.
MvEvaluation evaluate_J_l(const MarkovModel& model, StateIndex start, double xi,
                          const LiquidationStrategy& strategy);

struct MvStateResponse {
  StateIndex state = 0;
  double cont_mean = 0.0;
  double cont_variance = 0.0;
  double h = 0.0;            ///< unclipped; NaN when degenerate
  double response = 0.0;     ///< argmax of J_l(x, . (x) eta) over [0,1]
  double best_value = 0.0;   ///< J_l at the response
  bool degenerate = false;   ///< zero continuation variance
};

struct MvBestResponse {
  std::vector<MvStateResponse> states;
  std::vector<double> response() const;
};

/// Variances at or below this count as zero.
inline constexpr double kDegenerateVariance = 1e-14;

MvBestResponse mv_best_response(const MarkovModel& model, const LiquidationStrategy& strategy);

struct MvVerdict {
  bool equilibrium = false;
  MvBestResponse response;
  std::vector<double> gap;  ///< |response - eta| per state
};

MvVerdict is_equilibrium_liq_mv(const MarkovModel& model, const LiquidationStrategy& strategy,
                                double tol = kDefaultEquilibriumTol);

/// Face search on the residual eta - response plus damped best-response
/// iteration from every start; fixed points are re-verified.
EquilibriumReport solve_equilibria_liq_mv(const MarkovModel& model,
                                          const SolverOptions& options = {});

std::vector<StoppingRegion> enumerate_pure_equilibria_mv(const MarkovModel& model,
                                                         double tol = kDefaultEquilibriumTol);
RandomizedVerdict is_equilibrium_randomized_mv(const MarkovModel& model,
                                               const RandomizedStrategy& strategy,
                                               double tol = kDefaultEquilibriumTol);

}  // namespace tcstop
