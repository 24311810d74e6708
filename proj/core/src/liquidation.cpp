#include "tcstop/liquidation.hpp"

#include <algorithm>
#include <cmath>

#include "fractions.hpp"
#include "linear.hpp"
#include "tcstop/error.hpp"

namespace tcstop {

LiquidationStrategy LiquidationStrategy::normalized(const MarkovModel& model,
                                                    std::vector<double> eta) {
  detail::check_fraction_vector(model, eta, "liquidation strategy");
  for (StateIndex a : classify_states(model).absorbing) eta[a] = 1.0;
  return LiquidationStrategy{std::move(eta)};
}

LiquidationStrategy LiquidationStrategy::indicator(const MarkovModel& model,
                                                   const StoppingRegion& region) {
  std::vector<double> eta(model.size(), 0.0);
  for (StateIndex x : region.members()) eta.at(x) = 1.0;
  return normalized(model, std::move(eta));
}

LiquidationStrategy LiquidationStrategy::with_free(
    const MarkovModel& model, const LiquidationStrategy& base,
    const std::vector<StateIndex>& states, const std::vector<double>& fractions) {
  if (states.size() != fractions.size()) {
    throw StructuralError("with_free: " + std::to_string(states.size()) +
                          " states but " + std::to_string(fractions.size()) +
                          " fractions");
  }
  std::vector<double> eta = base.eta;
  if (eta.size() != model.size()) eta.assign(model.size(), 1.0);
  for (std::size_t i = 0; i < states.size(); ++i) eta.at(states[i]) = fractions[i];
  return normalized(model, std::move(eta));
}

LiquidationMoments liquidation_moments(const MarkovModel& model,
                                       const LiquidationStrategy& strategy) {
  detail::check_fraction_vector(model, strategy.eta, "liquidation strategy");
  const auto n = static_cast<Eigen::Index>(model.size());
  Eigen::VectorXd keep(n), keep2(n), r1(n);
  for (Eigen::Index x = 0; x < n; ++x) {
    const auto xs = static_cast<StateIndex>(x);
    const double eta = model.is_absorbing(xs) ? 1.0 : strategy.eta[xs];
    keep(x) = 1.0 - eta;
    keep2(x) = keep(x) * keep(x);
    r1(x) = eta * model.values[xs];
  }
  const Eigen::MatrixXd& P = model.transition;
  const Eigen::VectorXd V = detail::solve_discounted(P, keep, r1);
  const Eigen::VectorXd PV = P * V;

  Eigen::VectorXd r2(n);
  for (Eigen::Index x = 0; x < n; ++x) {
    const double v = model.values[static_cast<std::size_t>(x)];
    const double eta = 1.0 - keep(x);
    r2(x) = eta * eta * v * v + 2.0 * eta * v * keep(x) * PV(x);
  }
  const Eigen::VectorXd W = detail::solve_discounted(P, keep2, r2);
  const Eigen::VectorXd PW = P * W;

  LiquidationMoments out;
  out.value_mean.assign(V.begin(), V.end());
  out.value_second.assign(W.begin(), W.end());
  out.cont_mean.assign(PV.begin(), PV.end());
  out.cont_second.assign(PW.begin(), PW.end());
  // Variances by total variance rather than W - V^2, which cancels badly
  // when the payoff is nearly deterministic:
  // D(x) = sum_y P(x,y) (V(y) - PV(x))^2, S = keep^2 (P S + D), Var Y = P S + D.
  Eigen::VectorXd D(n);
  for (Eigen::Index x = 0; x < n; ++x) {
    double acc = 0.0;
    for (Eigen::Index y = 0; y < n; ++y) {
      const double d = V(y) - PV(x);
      acc += P(x, y) * d * d;
    }
    D(x) = acc;
  }
  const Eigen::VectorXd S = detail::solve_discounted(P, keep2, keep2.cwiseProduct(D));
  const Eigen::VectorXd cont_var = P * S + D;
  out.cont_variance.resize(model.size());
  for (std::size_t x = 0; x < model.size(); ++x) {
    out.cont_variance[x] = std::max(0.0, cont_var(static_cast<Eigen::Index>(x)));
  }
  return out;
}

std::vector<double> continuation_values(const MarkovModel& model,
                                        const LiquidationMoments& moments,
                                        Criterion criterion) {
  std::vector<double> g(model.size());
  for (std::size_t x = 0; x < g.size(); ++x) {
    g[x] = criterion_value(moments.cont_mean[x], moments.cont_variance[x], model.c,
                           criterion);
  }
  return g;
}

double continuation_value(const MarkovModel& model,
                          const LiquidationStrategy& strategy, StateIndex x,
                          Criterion criterion) {
  if (x >= model.size()) throw StructuralError("state index out of range");
  const LiquidationMoments m = liquidation_moments(model, strategy);
  return criterion_value(m.cont_mean[x], m.cont_variance[x], model.c, criterion);
}

double evaluate_K_l(const MarkovModel& model, StateIndex x, double xi,
                    const LiquidationStrategy& strategy) {
  if (!(xi >= 0.0 && xi <= 1.0)) {
    throw ValidationError("deviation fraction " + std::to_string(xi) +
                          " outside [0,1]");
  }
  const double g = continuation_value(model, strategy, x, Criterion::MeanStd);
  return (model.values.at(x) - g) * xi + g;
}

std::string_view to_string(StateClass cls) {
  switch (cls) {
    case StateClass::Go: return "go";
    case StateClass::Interior: return "interior";
    case StateClass::Stop: return "stop";
  }
  return "?";
}

StateClass classify_fraction(double eta) {
  if (eta <= 0.0) return StateClass::Go;
  if (eta >= 1.0) return StateClass::Stop;
  return StateClass::Interior;
}

LiquidationVerdict is_equilibrium_liq(const MarkovModel& model,
                                      const LiquidationStrategy& strategy,
                                      double tol) {
  const LiquidationMoments m = liquidation_moments(model, strategy);
  const std::vector<double> g = continuation_values(model, m, Criterion::MeanStd);
  LiquidationVerdict verdict;
  verdict.equilibrium = true;
  for (StateIndex x = 0; x < model.size(); ++x) {
    LiquidationStateStatus s;
    s.state = x;
    s.eta = model.is_absorbing(x) ? 1.0 : strategy.eta[x];
    s.value = model.values[x];
    s.continuation = g[x];
    s.margin = g[x] - s.value;
    s.cls = classify_fraction(s.eta);
    if (model.is_absorbing(x)) {
      s.satisfied = true;
    } else if (s.margin > tol) {
      s.satisfied = s.eta == 0.0;
    } else if (s.margin < -tol) {
      s.satisfied = s.eta == 1.0;
    } else {
      s.satisfied = true;
    }
    verdict.equilibrium = verdict.equilibrium && s.satisfied;
    verdict.states.push_back(s);
  }
  return verdict;
}

}  // namespace tcstop
