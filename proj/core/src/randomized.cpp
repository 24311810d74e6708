#include "tcstop/randomized.hpp"

#include <algorithm>
#include <cmath>

#include "fractions.hpp"
#include "linear.hpp"
#include "tcstop/error.hpp"

namespace tcstop {

namespace {

constexpr double kAuditTol = 1e-12;

// Real roots of a q^2 + b q + g = 0 (linear and constant cases included).
void push_quadratic_roots(double a, double b, double g, std::vector<double>& out) {
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(g)});
  if (scale == 0.0) return;
  if (std::abs(a) <= 1e-14 * scale) {
    if (std::abs(b) > 1e-14 * scale) out.push_back(-g / b);
    return;
  }
  double disc = b * b - 4.0 * a * g;
  if (disc < 0.0) {
    if (disc > -1e-12 * b * b) disc = 0.0;
    else return;
  }
  const double sq = std::sqrt(disc);
  // Numerically stable pair.
  const double t = -0.5 * (b + std::copysign(sq, b));
  if (t != 0.0) {
    out.push_back(t / a);
    out.push_back(g / t);
  } else {
    out.push_back(0.0);
  }
}

}  // namespace

RandomizedStrategy RandomizedStrategy::normalized(const MarkovModel& model,
                                                  std::vector<double> p) {
  detail::check_fraction_vector(model, p, "randomized strategy");
  for (StateIndex a : classify_states(model).absorbing) p[a] = 1.0;
  return RandomizedStrategy{std::move(p)};
}

RandomizedStrategy RandomizedStrategy::indicator(const MarkovModel& model,
                                                 const StoppingRegion& region) {
  std::vector<double> p(model.size(), 0.0);
  for (StateIndex x : region.members()) p.at(x) = 1.0;
  return normalized(model, std::move(p));
}

StoppedMoments stopped_moments(const MarkovModel& model,
                               const RandomizedStrategy& strategy) {
  detail::check_fraction_vector(model, strategy.p, "randomized strategy");
  const auto n = static_cast<Eigen::Index>(model.size());
  Eigen::VectorXd keep(n), r1(n), r2(n);
  for (Eigen::Index x = 0; x < n; ++x) {
    const double p = strategy.p[static_cast<std::size_t>(x)];
    const double v = model.values[static_cast<std::size_t>(x)];
    keep(x) = model.is_absorbing(static_cast<StateIndex>(x)) ? 0.0 : 1.0 - p;
    const double stop = 1.0 - keep(x);
    r1(x) = stop * v;
    r2(x) = stop * v * v;
  }
  const Eigen::VectorXd m = detail::solve_discounted(model.transition, keep, r1);
  const Eigen::VectorXd u = detail::solve_discounted(model.transition, keep, r2);
  StoppedMoments out;
  out.mean.assign(m.data(), m.data() + n);
  out.second.assign(u.data(), u.data() + n);
  return out;
}

DeviationMoments deviation_moments(const MarkovModel& model,
                                   const StoppedMoments& moments, StateIndex x,
                                   double q) {
  const auto i = static_cast<Eigen::Index>(x);
  double cont_mean = 0.0;
  double cont_second = 0.0;
  for (std::size_t y = 0; y < model.size(); ++y) {
    const double pxy = model.transition(i, static_cast<Eigen::Index>(y));
    cont_mean += pxy * moments.mean[y];
    cont_second += pxy * moments.second[y];
  }
  const double v = model.values[x];
  const double d = v - cont_mean;
  const double s2 = variance_from_moments(cont_mean, cont_second);
  return {q * v + (1.0 - q) * cont_mean, q * v * v + (1.0 - q) * cont_second,
          std::max(0.0, (1.0 - q) * (q * d * d + s2))};
}

double evaluate_K_r(const MarkovModel& model, StateIndex x, double q,
                    const RandomizedStrategy& strategy, Criterion criterion) {
  const StoppedMoments mom = stopped_moments(model, strategy);
  const DeviationMoments d = deviation_moments(model, mom, x, q);
  return criterion_value(d.mean, d.variance(), model.c, criterion);
}

namespace detail {

Maximum1D maximize_mean_std(double slope, double offset, double d2, double s2, double c) {
  auto f = [&](double q) {
    const double r = std::max(0.0, (1.0 - q) * (q * d2 + s2));
    return slope * q + offset - c * std::sqrt(r);
  };
  // R(q) = a q^2 + b q + g
  const double a = -d2;
  const double b = d2 - s2;
  const double g = s2;
  std::vector<double> candidates{0.0, 1.0};
  if (d2 > 0.0) candidates.push_back(-s2 / d2);
  // 4 slope^2 R(q) = c^2 (2 a q + b)^2
  const double k2 = 4.0 * slope * slope;
  const double c2 = c * c;
  push_quadratic_roots(k2 * a - 4.0 * c2 * a * a, k2 * b - 4.0 * c2 * a * b,
                       k2 * g - c2 * b * b, candidates);
  Maximum1D best{0.0, f(0.0)};
  for (double q : candidates) {
    if (!(q >= 0.0 && q <= 1.0)) continue;
    const double val = f(q);
    if (val > best.value) best = {q, val};
  }
  return best;
}

Maximum1D maximize_mean_variance(double slope, double offset, double d2, double s2, double c) {
  auto f = [&](double q) { return slope * q + offset - c * (1.0 - q) * (q * d2 + s2); };
  std::vector<double> candidates{0.0, 1.0};
  if (d2 != 0.0) candidates.push_back((slope + c * (d2 - s2)) / (2.0 * c * d2));
  Maximum1D best{0.0, f(0.0)};
  for (double q : candidates) {
    if (!(q >= 0.0 && q <= 1.0)) continue;
    const double val = f(q);
    if (val > best.value) best = {q, val};
  }
  return best;
}

}  // namespace detail

namespace {

BestDeviation best_deviation_from_moments(const MarkovModel& model,
                                          const StoppedMoments& mom,
                                          const RandomizedStrategy& strategy,
                                          StateIndex x, Criterion criterion) {
  // E(q) = cm + q (v - cm);  Var(q) = (1-q) (q (v-cm)^2 + s2)
  const DeviationMoments cont = deviation_moments(model, mom, x, 0.0);
  const double v = model.values[x];
  const double slope = v - cont.mean;
  const double d2 = slope * slope;
  const double s2 = cont.variance();
  const auto best = criterion == Criterion::MeanStd
                        ? detail::maximize_mean_std(slope, cont.mean, d2, s2, model.c)
                        : detail::maximize_mean_variance(slope, cont.mean, d2, s2, model.c);
  const DeviationMoments on = deviation_moments(model, mom, x, strategy.p[x]);
  BestDeviation out;
  out.state = x;
  out.q = best.argmax;
  out.value = best.value;
  out.on_path = criterion_value(on.mean, on.variance(), model.c, criterion);
  return out;
}

}  // namespace

BestDeviation best_deviation_randomized(const MarkovModel& model, StateIndex x,
                                        const RandomizedStrategy& strategy,
                                        Criterion criterion) {
  const StoppedMoments mom = stopped_moments(model, strategy);
  return best_deviation_from_moments(model, mom, strategy, x, criterion);
}

RandomizedVerdict is_equilibrium_randomized(const MarkovModel& model,
                                            const RandomizedStrategy& strategy,
                                            double tol, Criterion criterion) {
  const StoppedMoments mom = stopped_moments(model, strategy);
  RandomizedVerdict verdict;
  verdict.equilibrium = true;
  for (std::size_t x = 0; x < model.size(); ++x) {
    auto d = best_deviation_from_moments(model, mom, strategy, x, criterion);
    verdict.equilibrium = verdict.equilibrium && d.value <= d.on_path + tol;
    verdict.states.push_back(d);
  }
  return verdict;
}

MixtureAudit mixture_variance_audit(const MarkovModel& model, StateIndex start,
                                    const MixtureSpec& spec) {
  if (!(spec.lambda > 0.0 && spec.lambda < 1.0)) {
    throw ValidationError("mixture weight must lie in (0,1)");
  }
  const StoppedMoments m1 = stopped_moments(model, spec.first);
  const StoppedMoments m2 = stopped_moments(model, spec.second);
  const double lam = spec.lambda;
  MixtureAudit out;
  out.mean_first = m1.mean[start];
  out.mean_second = m2.mean[start];
  out.variance_first = m1.variance(start);
  out.variance_second = m2.variance(start);
  const double mix_mean = lam * out.mean_first + (1.0 - lam) * out.mean_second;
  const double mix_second = lam * m1.second[start] + (1.0 - lam) * m2.second[start];
  out.lhs = variance_from_moments(mix_mean, mix_second);
  out.middle = lam * out.variance_first + (1.0 - lam) * out.variance_second;
  const double sd = lam * std::sqrt(out.variance_first) +
                    (1.0 - lam) * std::sqrt(out.variance_second);
  out.rhs = sd * sd;

  const double scale = std::max(1.0, std::max(m1.second[start], m2.second[start]));
  const double tol = kAuditTol * scale;
  out.ordered = out.lhs >= out.middle - tol && out.middle >= out.rhs - tol;
  out.means_equal = std::abs(out.mean_first - out.mean_second) <= std::sqrt(tol);
  out.variances_equal = std::abs(out.variance_first - out.variance_second) <= tol;
  out.lhs_equals_middle = std::abs(out.lhs - out.middle) <= tol;
  out.middle_equals_rhs = std::abs(out.middle - out.rhs) <= tol;
  return out;
}

}  // namespace tcstop
