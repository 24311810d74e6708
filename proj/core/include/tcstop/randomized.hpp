#pragma once

// Time-homogeneous randomized stopping: at each visit to x the process is
// stopped with probability p(x), independently of the past.

#include <vector>

#include "tcstop/criterion.hpp"
#include "tcstop/markov.hpp"
#include "tcstop/pure_stopping.hpp"

namespace tcstop {

struct RandomizedStrategy {
  /// p[x] = probability of stopping at x given not stopped yet. Forced to 1
  /// on absorbing states (value-neutral).
  std::vector<double> p;

  /// Checks range and size, forces absorbing states to 1.
  static RandomizedStrategy normalized(const MarkovModel& model,
                                       std::vector<double> p);
  static RandomizedStrategy indicator(const MarkovModel& model,
                                      const StoppingRegion& region);
};

/// m(x) = E_x[X_gamma], u(x) = E_x[X_gamma^2] with stopping allowed at time 0.
struct StoppedMoments {
  std::vector<double> mean;
  std::vector<double> second;

  double variance(StateIndex x) const {
    return variance_from_moments(mean[x], second[x]);
  }
};

/// Solves m = p v + (1-p) P m and u = p v^2 + (1-p) P u.
StoppedMoments stopped_moments(const MarkovModel& model,
                               const RandomizedStrategy& strategy);

/// Moments at x when the first coin uses q instead of p(x):
/// E = q v(x) + (1-q) (P m)(x), E2 = q v(x)^2 + (1-q) (P u)(x).
/// The variance is kept in the factored form (1-q) (q d^2 + s^2), with
/// d = v(x) - (P m)(x) and s^2 the continuation variance, so it is exactly
/// zero at q = 1.
struct DeviationMoments {
  double mean = 0.0;
  double second = 0.0;
  double var = 0.0;
  double variance() const { return var; }
};

DeviationMoments deviation_moments(const MarkovModel& model,
                                   const StoppedMoments& moments, StateIndex x,
                                   double q);

/// K_r(x, q (x) p) for MeanStd, J_r(x, q (x) p) for MeanVariance.
double evaluate_K_r(const MarkovModel& model, StateIndex x, double q,
                    const RandomizedStrategy& strategy,
                    Criterion criterion = Criterion::MeanStd);

struct BestDeviation {
  StateIndex state = 0;
  double q = 0.0;         ///< a maximizer over [0,1]
  double value = 0.0;     ///< objective at q
  double on_path = 0.0;   ///< objective at q = p(x)
};

/// Exact maximum over q in [0,1]. The deviation payoff at x depends on the
/// deviation only through q(x), so a per-state 1-D search is complete.
BestDeviation best_deviation_randomized(const MarkovModel& model, StateIndex x,
                                        const RandomizedStrategy& strategy,
                                        Criterion criterion = Criterion::MeanStd);

struct RandomizedVerdict {
  bool equilibrium = false;
  std::vector<BestDeviation> states;
};

RandomizedVerdict is_equilibrium_randomized(const MarkovModel& model,
                                            const RandomizedStrategy& strategy,
                                            double tol = kDefaultEquilibriumTol,
                                            Criterion criterion = Criterion::MeanStd);

/// The branch mixture: with probability lambda follow `first`, otherwise
/// `second`. Both rules may stop at time 0.
struct MixtureSpec {
  RandomizedStrategy first;
  RandomizedStrategy second;
  double lambda = 0.5;
};

struct MixtureAudit {
  double mean_first = 0.0;
  double mean_second = 0.0;
  double variance_first = 0.0;
  double variance_second = 0.0;
  double lhs = 0.0;     ///< Var of the mixture
  double middle = 0.0;  ///< lambda Var1 + (1-lambda) Var2
  double rhs = 0.0;     ///< (lambda sd1 + (1-lambda) sd2)^2
  bool ordered = false; ///< lhs >= middle >= rhs (up to 1e-12 relative)
  bool means_equal = false;
  bool variances_equal = false;
  bool lhs_equals_middle = false;
  bool middle_equals_rhs = false;
};

MixtureAudit mixture_variance_audit(const MarkovModel& model, StateIndex start,
                                    const MixtureSpec& spec);

namespace detail {

/// max over q in [0,1] of  slope*q + offset - c*sqrt(R(q)) with
/// R(q) = (1-q)(q d2 + s2), in closed form: endpoints, roots of R and the
/// real roots of the squared first-order condition.
struct Maximum1D {
  double argmax;
  double value;
};
Maximum1D maximize_mean_std(double slope, double offset, double d2, double s2, double c);
/// Same for slope*q + offset - c*R(q).
Maximum1D maximize_mean_variance(double slope, double offset, double d2, double s2, double c);

}  // namespace detail

}  // namespace tcstop
