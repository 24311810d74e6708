#pragma once

// Pure Markov stopping: stop at the first entry into a fixed region.

#include <cstddef>
#include <vector>

#include "tcstop/criterion.hpp"
#include "tcstop/markov.hpp"

namespace tcstop {

inline constexpr double kDefaultEquilibriumTol = 1e-9;
/// Exhaustive routines enumerate 2^t regions over t transient states.
inline constexpr std::size_t kMaxEnumeratedTransient = 24;

struct RegionEvaluation {
  StateIndex start = 0;
  double mean = 0.0;
  double second_moment = 0.0;
  double variance = 0.0;
  double k_value = 0.0;  ///< mean - c * sqrt(variance)
  double j_value = 0.0;  ///< mean - c * variance

  double value(Criterion criterion) const {
    return criterion == Criterion::MeanStd ? k_value : j_value;
  }
};

/// Moments of the value at first entry into `region`.
RegionEvaluation evaluate_region(const MarkovModel& model, StateIndex start,
                                 const StoppingRegion& region, HitFrom from);

struct StateMargin {
  StateIndex state = 0;
  bool in_region = false;
  double value = 0.0;         ///< payoff of stopping now
  double continuation = 0.0;  ///< criterion value of waiting for re-entry (rho >= 1)
  /// value - continuation inside the region, continuation - value outside.
  /// Non-negative (up to tol) at every state of an equilibrium.
  double margin = 0.0;
  bool satisfied = false;
};

struct RegionVerdict {
  bool equilibrium = false;
  std::vector<StateMargin> margins;
};

/// Stop states must not prefer waiting and continue states must not prefer
/// stopping, each judged against the hitting time counted from step one.
RegionVerdict is_equilibrium_region(const MarkovModel& model,
                                    const StoppingRegion& region,
                                    Criterion criterion,
                                    double tol = kDefaultEquilibriumTol);

/// All normalized regions passing is_equilibrium_region, sorted by
/// cardinality then member order. Throws CapacityError above
/// kMaxEnumeratedTransient transient states.
std::vector<StoppingRegion> enumerate_pure_equilibria(
    const MarkovModel& model, Criterion criterion,
    double tol = kDefaultEquilibriumTol);

/// Pre-commitment optimum from `start`. The search covers pure Markov hitting
/// times only (first entry from step zero), so `value` is the supremum over
/// that class.
struct StaticOptimum {
  StateIndex start = 0;
  Criterion criterion = Criterion::MeanStd;
  double value = 0.0;
  /// Every normalized region within kTieTolerance of the optimum.
  std::vector<StoppingRegion> maximizers;
  std::size_t regions_searched = 0;

  static constexpr double kTieTolerance = 1e-9;
};

StaticOptimum static_optimum(const MarkovModel& model, StateIndex start,
                             Criterion criterion);

/// The 2^t normalized regions, in enumeration order (bit i of the index
/// selects the i-th transient state).
std::vector<StoppingRegion> all_normalized_regions(const MarkovModel& model);

}  // namespace tcstop
