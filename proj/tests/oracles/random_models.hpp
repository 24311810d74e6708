#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tcstop/liquidation.hpp"
#include "tcstop/markov.hpp"
#include "tcstop/randomized.hpp"

namespace tcstop::oracle {

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// n states, the first `absorbing` of them absorbing. Every transient row puts
// at least `leak` mass on an absorbing state so absorption is certain.
inline MarkovModel random_chain(std::mt19937_64& rng, std::size_t n, std::size_t absorbing,
                                double c, double leak = 0.05) {
  std::vector<double> values(n);
  for (auto& v : values) v = std::round(uniform01(rng) * 200.0) / 10.0;
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::size_t x = 0; x < n; ++x) {
    if (x < absorbing) {
      rows[x][x] = 1.0;
      continue;
    }
    double total = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      rows[x][y] = uniform01(rng) < 0.3 ? 0.0 : uniform01(rng);
      total += rows[x][y];
    }
    const std::size_t sink = static_cast<std::size_t>(rng() % absorbing);
    rows[x][sink] += leak * (total > 0.0 ? total : 1.0) + (total > 0.0 ? 0.0 : 1.0);
    total = 0.0;
    for (double p : rows[x]) total += p;
    for (double& p : rows[x]) p /= total;
  }
  MarkovModel m = make_model("random", std::move(values), rows, c);
  for (std::size_t x = 0; x < n; ++x) m.state_ids[x] = "s" + std::to_string(x);
  return m;
}

inline LiquidationStrategy random_liquidation(std::mt19937_64& rng, const MarkovModel& m) {
  std::vector<double> eta(m.size());
  for (auto& e : eta) {
    const double u = uniform01(rng);
    e = u < 0.15 ? 0.0 : (u < 0.3 ? 1.0 : uniform01(rng));
  }
  return LiquidationStrategy::normalized(m, std::move(eta));
}

inline RandomizedStrategy random_randomized(std::mt19937_64& rng, const MarkovModel& m) {
  std::vector<double> p(m.size());
  for (auto& e : p) {
    const double u = uniform01(rng);
    e = u < 0.15 ? 0.0 : (u < 0.3 ? 1.0 : uniform01(rng));
  }
  return RandomizedStrategy::normalized(m, std::move(p));
}

inline StoppingRegion random_region(std::mt19937_64& rng, const MarkovModel& m) {
  std::vector<StateIndex> members;
  for (StateIndex x = 0; x < m.size(); ++x) {
    if (m.is_absorbing(x) || uniform01(rng) < 0.5) members.push_back(x);
  }
  return StoppingRegion(std::move(members)).normalized(m);
}

}  // namespace tcstop::oracle
