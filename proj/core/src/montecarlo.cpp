#include "tcstop/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "tcstop/error.hpp"

namespace tcstop {

namespace {

class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  result_type operator()() {
    const std::uint64_t z = mix(state_);
    state_ += 0x9E3779B97F4A7C15ull;
    return z;
  }

 private:
  std::uint64_t state_;
};

class PathSampler {
 public:
  explicit PathSampler(const MarkovModel& model) : model_(model) {
    const std::size_t n = model.size();
    cumulative_.resize(n);
    for (std::size_t x = 0; x < n; ++x) {
      double acc = 0.0;
      for (std::size_t y = 0; y < n; ++y) {
        acc += model.transition(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
        cumulative_[x].push_back(acc);
      }
      absorbing_.push_back(model.is_absorbing(x));
    }
  }

  static SplitMix64 stream(std::uint64_t seed, std::uint64_t path) {
    return SplitMix64(SplitMix64::mix(SplitMix64::mix(seed) ^ path));
  }

  static double uniform(SplitMix64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  }

  StateIndex step(StateIndex x, SplitMix64& rng) const {
    const auto& row = cumulative_[x];
    const double u = uniform(rng) * row.back();
    auto it = std::upper_bound(row.begin(), row.end(), u);
    auto y = static_cast<StateIndex>(it - row.begin());
    if (y >= row.size()) y = row.size() - 1;
    // Skip zero-probability columns that upper_bound could land on.
    while (model_.transition(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) == 0.0 &&
           y > 0) {
      --y;
    }
    return y;
  }

  bool absorbing(StateIndex x) const { return absorbing_[x]; }

 private:
  const MarkovModel& model_;
  std::vector<std::vector<double>> cumulative_;
  std::vector<bool> absorbing_;
};

void check_config(const MarkovModel& model, const SimConfig& cfg) {
  require_valid(model);
  if (cfg.paths < 1) throw ValidationError("paths must be at least 1");
  if (cfg.max_steps < 1) throw ValidationError("max_steps must be at least 1");
  if (cfg.start >= model.size()) throw ValidationError("start state out of range");
}

// path_payoff(rng) returns the payoff, or nullopt when cut at max_steps.
template <typename PathFn>
SimEstimate run(const SimConfig& cfg, PathFn&& path_payoff) {
  std::vector<double> payoffs;
  payoffs.reserve(cfg.paths);
  std::size_t unabsorbed = 0;
  for (std::size_t i = 0; i < cfg.paths; ++i) {
    auto rng = PathSampler::stream(cfg.seed, i);
    if (auto p = path_payoff(rng)) payoffs.push_back(*p);
    else ++unabsorbed;
  }
  return summarize(payoffs, unabsorbed);
}

}  // namespace

SimEstimate summarize(std::span<const double> payoffs, std::size_t unabsorbed) {
  SimEstimate e;
  e.paths = payoffs.size() + unabsorbed;
  e.unabsorbed = unabsorbed;
  e.absorbed_fraction =
      e.paths ? static_cast<double>(payoffs.size()) / static_cast<double>(e.paths) : 0.0;
  const auto n = static_cast<double>(payoffs.size());
  if (payoffs.empty()) return e;
  double sum = 0.0;
  for (double p : payoffs) sum += p;
  e.mean = sum / n;
  double m2 = 0.0, m4 = 0.0;
  for (double p : payoffs) {
    const double d = p - e.mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  if (payoffs.size() < 2) return e;
  e.variance = m2 / (n - 1.0);
  e.se_mean = std::sqrt(e.variance / n);
  const double mu2 = m2 / n, mu4 = m4 / n;
  const double var_s2 = (mu4 - mu2 * mu2 * (n - 3.0) / (n - 1.0)) / n;
  e.se_variance = std::sqrt(std::max(var_s2, 0.0));
  return e;
}

SimEstimate simulate_liquidation(const MarkovModel& model, const LiquidationStrategy& strategy,
                                 const SimConfig& cfg) {
  check_config(model, cfg);
  const auto eta = LiquidationStrategy::normalized(model, strategy.eta);
  const PathSampler sampler(model);
  return run(cfg, [&](SplitMix64& rng) -> std::optional<double> {
    StateIndex x = cfg.start;
    double mass = 1.0, payoff = 0.0;
    for (std::size_t k = 0; k <= cfg.max_steps; ++k) {
      const double v = model.values[x];
      if (sampler.absorbing(x)) return payoff + mass * v;
      payoff += mass * eta.eta[x] * v;
      mass *= 1.0 - eta.eta[x];
      if (mass == 0.0) return payoff;
      if (k == cfg.max_steps) break;
      x = sampler.step(x, rng);
    }
    return std::nullopt;
  });
}

SimEstimate simulate_randomized(const MarkovModel& model, const RandomizedStrategy& strategy,
                                const SimConfig& cfg) {
  check_config(model, cfg);
  const auto p = RandomizedStrategy::normalized(model, strategy.p);
  const PathSampler sampler(model);
  return run(cfg, [&](SplitMix64& rng) -> std::optional<double> {
    StateIndex x = cfg.start;
    for (std::size_t k = 0; k <= cfg.max_steps; ++k) {
      if (sampler.absorbing(x)) return model.values[x];
      if (p.p[x] >= 1.0 || (p.p[x] > 0.0 && PathSampler::uniform(rng) < p.p[x])) {
        return model.values[x];
      }
      if (k == cfg.max_steps) break;
      x = sampler.step(x, rng);
    }
    return std::nullopt;
  });
}

SimEstimate simulate_blend(const MarkovModel& model, const ScriptedBlend& blend,
                           const SimConfig& cfg) {
  check_config(model, cfg);
  validate_blend(model, blend);
  const PathSampler sampler(model);
  const std::size_t k = blend.regions.size();
  return run(cfg, [&](SplitMix64& rng) -> std::optional<double> {
    std::vector<bool> done(k, false);
    std::size_t remaining = k;
    double payoff = 0.0;
    StateIndex x = cfg.start;
    for (std::size_t step = 0; step <= cfg.max_steps; ++step) {
      for (std::size_t i = 0; i < k; ++i) {
        if (!done[i] && blend.regions[i].contains(x)) {
          done[i] = true;
          --remaining;
          payoff += blend.weights[i] * model.values[x];
        }
      }
      if (remaining == 0) return payoff;
      if (step == cfg.max_steps) break;
      x = sampler.step(x, rng);
    }
    return std::nullopt;
  });
}

}  // namespace tcstop
