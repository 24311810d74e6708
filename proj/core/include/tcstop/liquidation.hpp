#pragma once

// Time-homogeneous liquidation: at each visit to x a fraction eta(x) of the
// remaining asset is sold at price x; whatever is left at absorption is sold
// at the absorbing value.

#include <vector>

#include "tcstop/criterion.hpp"
#include "tcstop/markov.hpp"
#include "tcstop/pure_stopping.hpp"

namespace tcstop {

struct LiquidationStrategy {
  /// eta[x] in [0,1]; forced to 1 on absorbing states.
  std::vector<double> eta;

  static LiquidationStrategy normalized(const MarkovModel& model,
                                        std::vector<double> eta);
  static LiquidationStrategy indicator(const MarkovModel& model,
                                       const StoppingRegion& region);
  /// Strategy equal to `base` except on `states`, which take `fractions`.
  static LiquidationStrategy with_free(const MarkovModel& model,
                                       const LiquidationStrategy& base,
                                       const std::vector<StateIndex>& states,
                                       const std::vector<double>& fractions);
};

/// V(x) = E_x[theta(X)], W(x) = E_x[theta(X)^2] and the moments of the
/// continuation payoff Y (the same liquidation restarted at step one):
/// theta(X) = eta(X_0) X_0 + (1 - eta(X_0)) Y.
struct LiquidationMoments {
  std::vector<double> value_mean;
  std::vector<double> value_second;
  std::vector<double> cont_mean;
  std::vector<double> cont_second;
  std::vector<double> cont_variance;  ///< clamped at zero
};

/// V = eta v + (1-eta) P V;
/// W = eta^2 v^2 + 2 eta (1-eta) v (P V) + (1-eta)^2 P W.
LiquidationMoments liquidation_moments(const MarkovModel& model,
                                       const LiquidationStrategy& strategy);

/// g_x = E_x[Y] - c sd_x[Y] (MeanStd) or E_x[Y] - c Var_x[Y] (MeanVariance).
double continuation_value(const MarkovModel& model,
                          const LiquidationStrategy& strategy, StateIndex x,
                          Criterion criterion = Criterion::MeanStd);
std::vector<double> continuation_values(const MarkovModel& model,
                                        const LiquidationMoments& moments,
                                        Criterion criterion = Criterion::MeanStd);

/// K_l(x, xi (x) eta) = (v(x) - g_x) xi + g_x: sell xi at x now, then follow eta.
double evaluate_K_l(const MarkovModel& model, StateIndex x, double xi,
                    const LiquidationStrategy& strategy);

enum class StateClass { Go, Interior, Stop };
std::string_view to_string(StateClass cls);
StateClass classify_fraction(double eta);

struct LiquidationStateStatus {
  StateIndex state = 0;
  double eta = 0.0;
  double value = 0.0;
  double continuation = 0.0;
  double margin = 0.0;  ///< continuation - value
  StateClass cls = StateClass::Go;
  bool satisfied = false;
};

struct LiquidationVerdict {
  bool equilibrium = false;
  std::vector<LiquidationStateStatus> states;
};

/// g_x > v(x) + tol forces eta(x) = 0; g_x < v(x) - tol forces eta(x) = 1;
/// inside the equality band any eta(x) is allowed.
LiquidationVerdict is_equilibrium_liq(const MarkovModel& model,
                                      const LiquidationStrategy& strategy,
                                      double tol = kDefaultEquilibriumTol);

}  // namespace tcstop
