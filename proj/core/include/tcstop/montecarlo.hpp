#pragma once

// Path sampling for every analytic payoff.
//
// Path i draws from its own SplitMix64 stream whose starting state is
// mix(mix(seed) xor i), mix being one SplitMix64 output step; uniforms are the
// top 53 bits scaled by 2^-53. Payoffs are reduced in path order, so estimates do
// not depend on how paths are scheduled.

#include <cstddef>
#include <cstdint>
#include <span>

#include "tcstop/blend.hpp"
#include "tcstop/liquidation.hpp"
#include "tcstop/randomized.hpp"

namespace tcstop {

struct SimConfig {
  std::size_t paths = 100000;
  std::uint64_t seed = 1;
  std::size_t max_steps = 1'000'000;
  StateIndex start = 0;
};

struct SimEstimate {
  std::size_t paths = 0;
  double mean = 0.0;
  double variance = 0.0;     ///< unbiased sample variance
  double se_mean = 0.0;
  double se_variance = 0.0;
  double absorbed_fraction = 0.0;
  std::size_t unabsorbed = 0;  ///< paths cut at max_steps (excluded from moments)

  bool all_absorbed() const { return unabsorbed == 0; }
};

/// Sample moments of `payoffs` with standard errors.
SimEstimate summarize(std::span<const double> payoffs, std::size_t unabsorbed);

SimEstimate simulate_liquidation(const MarkovModel& model, const LiquidationStrategy& strategy,
                                 const SimConfig& cfg);
SimEstimate simulate_randomized(const MarkovModel& model, const RandomizedStrategy& strategy,
                                const SimConfig& cfg);
SimEstimate simulate_blend(const MarkovModel& model, const ScriptedBlend& blend,
                           const SimConfig& cfg);

}  // namespace tcstop
