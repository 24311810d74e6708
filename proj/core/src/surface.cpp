#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "tcstop/equilibrium.hpp"
#include "tcstop/error.hpp"

namespace tcstop {

namespace {

using Point = std::array<double, 2>;
using Segment = std::array<Point, 2>;

constexpr double kFlatTol = 1e-12;

Point lerp(const Point& a, const Point& b, double fa, double fb) {
  const double t = fa == fb ? 0.5 : fa / (fa - fb);
  return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
}

// Marching squares over a row-major node grid.
std::vector<Segment> march(const std::vector<double>& axis, const std::vector<double>& f) {
  const std::size_t N = axis.size();
  std::vector<Segment> out;
  for (std::size_t i = 0; i + 1 < N; ++i) {
    for (std::size_t j = 0; j + 1 < N; ++j) {
      // Corners counter-clockwise from (i, j).
      const std::array<Point, 4> p{Point{axis[i], axis[j]}, Point{axis[i + 1], axis[j]},
                                   Point{axis[i + 1], axis[j + 1]}, Point{axis[i], axis[j + 1]}};
      const std::array<double, 4> v{f[i * N + j], f[(i + 1) * N + j],
                                    f[(i + 1) * N + j + 1], f[i * N + j + 1]};
      std::array<bool, 4> up{};
      for (int k = 0; k < 4; ++k) up[k] = v[k] > 0.0;
      std::vector<Point> cross;
      std::vector<int> edge;
      for (int k = 0; k < 4; ++k) {
        const int l = (k + 1) % 4;
        if (up[k] != up[l]) {
          cross.push_back(lerp(p[k], p[l], v[k], v[l]));
          edge.push_back(k);
        }
      }
      if (cross.size() == 2) {
        out.push_back({cross[0], cross[1]});
      } else if (cross.size() == 4) {
        const double centre = 0.25 * (v[0] + v[1] + v[2] + v[3]);
        // Pair crossings so the centre's side stays connected.
        if ((centre > 0.0) == up[0]) {
          out.push_back({cross[0], cross[1]});
          out.push_back({cross[2], cross[3]});
        } else {
          out.push_back({cross[3], cross[0]});
          out.push_back({cross[1], cross[2]});
        }
      }
    }
  }
  return out;
}

std::pair<long long, long long> key(const Point& p) {
  return {std::llround(p[0] * 1e12), std::llround(p[1] * 1e12)};
}

std::vector<std::vector<Point>> chain(const std::vector<Segment>& segs) {
  std::multimap<std::pair<long long, long long>, std::size_t> ends;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    ends.emplace(key(segs[s][0]), s);
    ends.emplace(key(segs[s][1]), s);
  }
  std::vector<bool> used(segs.size(), false);
  auto next_from = [&](const Point& p) -> std::optional<std::size_t> {
    auto [lo, hi] = ends.equal_range(key(p));
    for (auto it = lo; it != hi; ++it) {
      if (!used[it->second]) return it->second;
    }
    return std::nullopt;
  };
  std::vector<std::vector<Point>> lines;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    if (used[s]) continue;
    used[s] = true;
    std::vector<Point> line{segs[s][0], segs[s][1]};
    for (int dir = 0; dir < 2; ++dir) {
      while (auto n = next_from(line.back())) {
        used[*n] = true;
        const Segment& g = segs[*n];
        line.push_back(key(g[0]) == key(line.back()) ? g[1] : g[0]);
      }
      std::reverse(line.begin(), line.end());
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

std::optional<Point> intersect(const Point& p, const Point& p2, const Point& q, const Point& q2) {
  const double rx = p2[0] - p[0], ry = p2[1] - p[1];
  const double sx = q2[0] - q[0], sy = q2[1] - q[1];
  const double den = rx * sy - ry * sx;
  if (den == 0.0) return std::nullopt;
  const double qpx = q[0] - p[0], qpy = q[1] - p[1];
  const double t = (qpx * sy - qpy * sx) / den;
  const double u = (qpx * ry - qpy * rx) / den;
  constexpr double eps = 1e-12;
  if (t < -eps || t > 1 + eps || u < -eps || u > 1 + eps) return std::nullopt;
  return Point{p[0] + t * rx, p[1] + t * ry};
}

}  // namespace

std::size_t SurfaceGrid::node_count() const {
  return free_states.size() == 1 ? axis.size() : axis.size() * axis.size();
}

SurfaceGrid continuation_surface(const MarkovModel& model, const LiquidationStrategy& base,
                                 const std::vector<StateIndex>& free_states,
                                 double grid_step, std::vector<StateIndex> watched,
                                 Criterion criterion) {
  require_valid(model);
  if (free_states.empty()) throw ValidationError("surface needs at least one free state");
  if (free_states.size() > 2) {
    throw CapacityError("surface supports at most 2 free states, got " +
                        std::to_string(free_states.size()));
  }
  if (!(grid_step > 0.0 && grid_step <= 0.5)) {
    throw ValidationError("grid step must lie in (0, 0.5]");
  }
  for (StateIndex x : free_states) {
    if (x >= model.size() || model.is_absorbing(x)) {
      throw ValidationError("free states must be transient");
    }
  }
  if (watched.empty()) watched = free_states;

  SurfaceGrid grid;
  grid.free_states = free_states;
  grid.watched = watched;
  const auto n = static_cast<std::size_t>(std::ceil(1.0 / grid_step - 1e-9));
  for (std::size_t i = 0; i <= n; ++i) {
    grid.axis.push_back(static_cast<double>(i) / static_cast<double>(n));
  }
  const std::size_t N = grid.axis.size();
  const std::size_t nodes = free_states.size() == 1 ? N : N * N;
  grid.values.assign(watched.size(), std::vector<double>(nodes));

  LiquidationStrategy start = base;
  if (start.eta.size() != model.size()) start.eta.assign(model.size(), 1.0);
  std::vector<double> coords(free_states.size());
  for (std::size_t node = 0; node < nodes; ++node) {
    if (free_states.size() == 1) {
      coords[0] = grid.axis[node];
    } else {
      coords[0] = grid.axis[node / N];
      coords[1] = grid.axis[node % N];
    }
    const auto eta = LiquidationStrategy::with_free(model, start, free_states, coords);
    const auto g = continuation_values(model, liquidation_moments(model, eta), criterion);
    for (std::size_t w = 0; w < watched.size(); ++w) grid.values[w][node] = g[watched[w]];
  }

  for (std::size_t w = 0; w < watched.size(); ++w) {
    const double v = model.values[watched[w]];
    std::vector<double> f(nodes);
    bool flat = true;
    for (std::size_t i = 0; i < nodes; ++i) {
      f[i] = grid.values[w][i] - v;
      flat = flat && std::abs(f[i]) <= kFlatTol;
    }
    grid.flat.push_back(flat);
    std::vector<std::vector<Point>> lines;
    if (!flat) {
      if (free_states.size() == 1) {
        for (std::size_t i = 0; i + 1 < N; ++i) {
          if ((f[i] > 0.0) != (f[i + 1] > 0.0)) {
            const Point a{grid.axis[i], 0.0}, b{grid.axis[i + 1], 0.0};
            lines.push_back({lerp(a, b, f[i], f[i + 1])});
          }
        }
      } else {
        lines = chain(march(grid.axis, f));
      }
    }
    grid.contours.push_back(std::move(lines));
  }
  return grid;
}

std::vector<std::array<double, 2>> contour_intersections(const SurfaceGrid& grid,
                                                         std::size_t first,
                                                         std::size_t second,
                                                         double merge_radius) {
  if (first >= grid.contours.size() || second >= grid.contours.size()) {
    throw ValidationError("watched index out of range");
  }
  std::vector<Point> hits;
  auto add = [&](const Point& p) {
    for (const Point& h : hits) {
      if (std::max(std::abs(h[0] - p[0]), std::abs(h[1] - p[1])) <= merge_radius) return;
    }
    hits.push_back(p);
  };
  if (grid.free_states.size() == 1) {
    for (const auto& a : grid.contours[first]) {
      for (const auto& b : grid.contours[second]) {
        if (std::abs(a[0][0] - b[0][0]) <= merge_radius) add(a[0]);
      }
    }
    return hits;
  }
  for (const auto& la : grid.contours[first]) {
    for (std::size_t i = 0; i + 1 < la.size(); ++i) {
      for (const auto& lb : grid.contours[second]) {
        for (std::size_t j = 0; j + 1 < lb.size(); ++j) {
          if (auto p = intersect(la[i], la[i + 1], lb[j], lb[j + 1])) add(*p);
        }
      }
    }
  }
  return hits;
}

}  // namespace tcstop
