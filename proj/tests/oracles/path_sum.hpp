#pragma once

// Forward enumeration of payoff moments, path mass aggregated by current
// state. Shares nothing with the linear-system engine.

#include <algorithm>
#include <cmath>
#include <vector>

#include "tcstop/markov.hpp"

namespace tcstop::oracle {

struct PathSum {
  double mean = 0.0;
  double second = 0.0;
  double tail = 0.0;  ///< bound on the truncated mass times payoff scale
  std::size_t steps = 0;
};

// theta = sum_n R_n eta(X_n) v(X_n), R_{n+1} = R_n (1 - eta(X_n)), R_0 = 1.
// Per state we carry E[1], E[A], E[A^2], E[R], E[R^2], E[A R] on {X_n = x}.
inline PathSum liquidation_path_sum(const MarkovModel& m, StateIndex start,
                                    const std::vector<double>& eta, double tail_tol = 1e-13,
                                    std::size_t max_steps = 2'000'000) {
  const std::size_t n = m.size();
  double vmax = 0.0;
  for (double v : m.values) vmax = std::max(vmax, std::abs(v));
  const double scale = std::max(1.0, 3.0 * vmax * vmax);
  std::vector<double> p(n, 0.0), a1(n, 0.0), a2(n, 0.0), r1(n, 0.0), r2(n, 0.0), ar(n, 0.0);
  p[start] = 1.0;
  r1[start] = 1.0;
  r2[start] = 1.0;
  PathSum out;
  for (; out.steps < max_steps; ++out.steps) {
    for (std::size_t x = 0; x < n; ++x) {
      const double e = eta[x];
      const double v = m.values[x];
      a2[x] += 2.0 * e * v * ar[x] + e * e * v * v * r2[x];
      ar[x] = (1.0 - e) * (ar[x] + e * v * r2[x]);
      a1[x] += r1[x] * e * v;
      r1[x] *= 1.0 - e;
      r2[x] *= (1.0 - e) * (1.0 - e);
    }
    double remaining = 0.0;
    for (double r : r1) remaining += r;
    out.tail = remaining * scale;
    if (out.tail < tail_tol) break;
    auto step = [&](std::vector<double>& q) {
      std::vector<double> next(n, 0.0);
      for (std::size_t x = 0; x < n; ++x) {
        if (q[x] == 0.0) continue;
        for (std::size_t y = 0; y < n; ++y) {
          next[y] += q[x] * m.transition(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
        }
      }
      q.swap(next);
    };
    for (auto* q : {&p, &a1, &a2, &r1, &r2, &ar}) step(*q);
  }
  for (std::size_t x = 0; x < n; ++x) {
    out.mean += a1[x];
    out.second += a2[x];
  }
  return out;
}

// Randomized stopping: stop at each visit with probability p(x).
inline PathSum randomized_path_sum(const MarkovModel& m, StateIndex start,
                                   const std::vector<double>& stop, double tail_tol = 1e-13,
                                   std::size_t max_steps = 2'000'000) {
  const std::size_t n = m.size();
  double vmax = 0.0;
  for (double v : m.values) vmax = std::max(vmax, std::abs(v));
  const double scale = std::max(1.0, vmax * vmax);
  std::vector<double> mass(n, 0.0);
  mass[start] = 1.0;
  PathSum out;
  for (; out.steps < max_steps; ++out.steps) {
    double remaining = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      const double s = mass[x] * stop[x];
      out.mean += s * m.values[x];
      out.second += s * m.values[x] * m.values[x];
      mass[x] -= s;
      remaining += mass[x];
    }
    out.tail = remaining * scale;
    if (out.tail < tail_tol) break;
    std::vector<double> next(n, 0.0);
    for (std::size_t x = 0; x < n; ++x) {
      if (mass[x] == 0.0) continue;
      for (std::size_t y = 0; y < n; ++y) {
        next[y] += mass[x] * m.transition(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
      }
    }
    mass.swap(next);
  }
  return out;
}

// Moments of the continuation payoff: one step of the chain, then theta.
inline PathSum continuation_path_sum(const MarkovModel& m, StateIndex x,
                                     const std::vector<double>& eta, double tail_tol = 1e-13) {
  PathSum out;
  for (StateIndex y = 0; y < m.size(); ++y) {
    const double pxy = m.transition(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
    if (pxy == 0.0) continue;
    const PathSum s = liquidation_path_sum(m, y, eta, tail_tol);
    out.mean += pxy * s.mean;
    out.second += pxy * s.second;
    out.tail = std::max(out.tail, s.tail);
    out.steps = std::max(out.steps, s.steps);
  }
  return out;
}

}  // namespace tcstop::oracle
