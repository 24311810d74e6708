#pragma once

// Weighted sums of first-entry values of several regions along one path.

#include <cstddef>
#include <utility>
#include <vector>

#include "tcstop/markov.hpp"

namespace tcstop {

inline constexpr std::size_t kMaxLiftedStates = 1'000'000;

struct ScriptedBlend {
  std::vector<double> weights;          ///< positive, summing to one
  std::vector<StoppingRegion> regions;  ///< normalized; entry counted from step 0
};

/// Throws ValidationError on bad weights or unnormalized regions.
void validate_blend(const MarkovModel& model, const ScriptedBlend& blend);

struct BlendLaw {
  /// (payoff, probability), sorted by payoff; atoms closer than 1e-12 merged.
  std::vector<std::pair<double, double>> distribution;
  double mean = 0.0;
  double second_moment = 0.0;
  double variance = 0.0;
  double k_value = 0.0;
  double j_value = 0.0;
  std::size_t lifted_states = 0;
};

/// Exact law of sum_i w_i X_{tau_i} via a chain on (current state, stopped
/// state of each rule or running). Throws CapacityError past kMaxLiftedStates.
BlendLaw scripted_blend_law(const MarkovModel& model, StateIndex start,
                            const ScriptedBlend& blend);

}  // namespace tcstop
