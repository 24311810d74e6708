#include "tcstop/mean_variance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "solve_common.hpp"
#include "tcstop/error.hpp"

namespace tcstop {

MvEvaluation evaluate_region_mv(const MarkovModel& model, StateIndex start,
                                const StoppingRegion& region, HitFrom from) {
  const RegionEvaluation e = evaluate_region(model, start, region, from);
  return {start, e.mean, e.variance, e.j_value};
}

MvEvaluation evaluate_K_r_mv(const MarkovModel& model, StateIndex start, double q,
                             const RandomizedStrategy& strategy) {
  const StoppedMoments m = stopped_moments(model, strategy);
  const DeviationMoments d = deviation_moments(model, m, start, q);
  const double var = d.variance();
  return {start, d.mean, var, d.mean - model.c * var};
}

namespace {

double quadratic_J(double c, double E, double V, double v, double xi) {
  const double cv = c * V;
  return -cv * xi * xi + (2.0 * cv - E + v) * xi + E - cv;
}

}  // namespace

MvEvaluation evaluate_J_l(const MarkovModel& model, StateIndex start, double xi,
                          const LiquidationStrategy& strategy) {
  if (start >= model.size()) throw StructuralError("state index out of range");
  if (!(xi >= 0.0 && xi <= 1.0)) {
    throw ValidationError("deviation fraction " + std::to_string(xi) + " outside [0,1]");
  }
  const LiquidationMoments m = liquidation_moments(model, strategy);
  const double v = model.values[start];
  const double E = m.cont_mean[start];
  const double V = m.cont_variance[start];
  // Payoff xi v + (1 - xi) Y.
  const double mean = xi * v + (1.0 - xi) * E;
  const double var = (1.0 - xi) * (1.0 - xi) * V;
  return {start, mean, var, quadratic_J(model.c, E, V, v, xi)};
}

std::vector<double> MvBestResponse::response() const {
  std::vector<double> r;
  r.reserve(states.size());
  for (const auto& s : states) r.push_back(s.response);
  return r;
}

MvBestResponse mv_best_response(const MarkovModel& model, const LiquidationStrategy& strategy) {
  const LiquidationMoments m = liquidation_moments(model, strategy);
  MvBestResponse out;
  for (StateIndex x = 0; x < model.size(); ++x) {
    MvStateResponse s;
    s.state = x;
    s.cont_mean = m.cont_mean[x];
    s.cont_variance = m.cont_variance[x];
    const double v = model.values[x];
    if (model.is_absorbing(x)) {
      s.degenerate = s.cont_variance <= kDegenerateVariance;
      s.h = s.degenerate ? std::numeric_limits<double>::quiet_NaN() : 1.0;
      s.response = 1.0;
    } else if (s.cont_variance <= kDegenerateVariance) {
      s.degenerate = true;
      s.h = std::numeric_limits<double>::quiet_NaN();
      s.response = v > s.cont_mean ? 1.0 : v < s.cont_mean ? 0.0 : strategy.eta[x];
    } else {
      const double two_cv = 2.0 * model.c * s.cont_variance;
      s.h = (two_cv - s.cont_mean + v) / two_cv;
      s.response = std::clamp(s.h, 0.0, 1.0);
    }
    s.best_value = quadratic_J(model.c, s.cont_mean, s.cont_variance, v, s.response);
    out.states.push_back(s);
  }
  return out;
}

MvVerdict is_equilibrium_liq_mv(const MarkovModel& model, const LiquidationStrategy& strategy,
                                double tol) {
  MvVerdict v;
  v.response = mv_best_response(model, strategy);
  v.equilibrium = true;
  for (StateIndex x = 0; x < model.size(); ++x) {
    const double eta = model.is_absorbing(x) ? 1.0 : strategy.eta[x];
    const double gap = std::abs(v.response.states[x].response - eta);
    v.gap.push_back(gap);
    if (gap > tol) v.equilibrium = false;
  }
  return v;
}

EquilibriumReport solve_equilibria_liq_mv(const MarkovModel& model,
                                          const SolverOptions& options) {
  const auto transient = classify_states(model).transient;
  detail::ResponseFn response = [&](const std::vector<double>& z, std::vector<double>& b) {
    const auto eta = detail::embed_transient(model, transient, z);
    const MvBestResponse br = mv_best_response(model, eta);
    b.resize(transient.size());
    for (std::size_t k = 0; k < transient.size(); ++k) b[k] = br.states[transient[k]].response;
  };
  detail::ResidualFn residual = [&](const std::vector<double>& z, std::vector<double>& r) {
    response(z, r);
    for (std::size_t k = 0; k < z.size(); ++k) r[k] = z[k] - r[k];
  };
  const double verify_tol = std::max(options.tol, 1e-8);
  detail::VerifyFn verify = [&](const LiquidationStrategy& eta) {
    return is_equilibrium_liq_mv(model, eta, verify_tol).equilibrium;
  };
  return detail::solve_generic(model, Criterion::MeanVariance, options, residual, response,
                               verify, true);
}

std::vector<StoppingRegion> enumerate_pure_equilibria_mv(const MarkovModel& model, double tol) {
  return enumerate_pure_equilibria(model, Criterion::MeanVariance, tol);
}

RandomizedVerdict is_equilibrium_randomized_mv(const MarkovModel& model,
                                               const RandomizedStrategy& strategy,
                                               double tol) {
  return is_equilibrium_randomized(model, strategy, tol, Criterion::MeanVariance);
}

}  // namespace tcstop
