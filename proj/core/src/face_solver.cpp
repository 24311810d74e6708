#include "face_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "tcstop/error.hpp"

namespace tcstop::detail {

namespace {

enum class Pin : std::uint8_t { Zero, One, Free };

constexpr std::size_t kBeamWidth = 64;
constexpr double kFallbackAccept = 1e-8;

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<std::vector<Pin>> all_faces(std::size_t dims) {
  std::size_t count = 1;
  for (std::size_t i = 0; i < dims; ++i) count *= 3;
  std::vector<std::vector<Pin>> faces;
  faces.reserve(count);
  for (std::size_t code = 0; code < count; ++code) {
    std::vector<Pin> pins(dims);
    std::size_t c = code;
    for (std::size_t i = dims; i-- > 0;) {
      pins[i] = static_cast<Pin>(c % 3);
      c /= 3;
    }
    faces.push_back(std::move(pins));
  }
  std::stable_sort(faces.begin(), faces.end(), [](const auto& a, const auto& b) {
    const auto fa = std::count(a.begin(), a.end(), Pin::Free);
    const auto fb = std::count(b.begin(), b.end(), Pin::Free);
    return fa < fb;
  });
  return faces;
}

std::string face_label(const std::vector<Pin>& pins, const std::vector<std::string>& labels) {
  std::string s;
  for (std::size_t i = 0; i < pins.size(); ++i) {
    if (i) s += ',';
    s += labels[i];
    s += pins[i] == Pin::Zero ? "=0" : pins[i] == Pin::One ? "=1" : "=I";
  }
  return s;
}

class Face {
 public:
  Face(std::size_t dims, std::vector<Pin> pins, const ResidualFn& residual)
      : pins_(std::move(pins)), residual_(residual), full_(dims), r_(dims) {
    for (std::size_t i = 0; i < dims; ++i) {
      if (pins_[i] == Pin::Free) free_.push_back(i);
      else full_[i] = pins_[i] == Pin::One ? 1.0 : 0.0;
    }
  }

  std::size_t dim() const { return free_.size(); }
  const std::vector<Pin>& pins() const { return pins_; }

  std::vector<double> embed(const std::vector<double>& z) const {
    std::vector<double> p = full_;
    for (std::size_t k = 0; k < free_.size(); ++k) p[free_[k]] = z[k];
    return p;
  }

  void full_residual(const std::vector<double>& point, std::vector<double>& r) const {
    residual_(point, r);
  }

  // Residual components of the free coordinates at free-coordinate point z.
  void operator()(const std::vector<double>& z, std::vector<double>& out) {
    const std::vector<double> p = embed(z);
    residual_(p, r_);
    out.resize(free_.size());
    for (std::size_t k = 0; k < free_.size(); ++k) out[k] = r_[free_[k]];
  }

  bool pinned_ok(const std::vector<double>& r, double tol) const {
    for (std::size_t i = 0; i < pins_.size(); ++i) {
      if (pins_[i] == Pin::Zero && r[i] < -tol) return false;
      if (pins_[i] == Pin::One && r[i] > tol) return false;
    }
    return true;
  }

 private:
  std::vector<Pin> pins_;
  const ResidualFn& residual_;
  std::vector<std::size_t> free_;
  std::vector<double> full_;
  std::vector<double> r_;
};

struct Polish {
  bool converged = false;
  std::vector<double> z;
  double residual = 0.0;
};

Polish newton(Face& F, std::vector<double> z, const SolverOptions& opt) {
  const std::size_t d = z.size();
  std::vector<double> r, rp, rm, zn, rn;
  F(z, r);
  double nr = max_abs(r);
  Eigen::MatrixXd J(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(d));
  for (std::size_t it = 0; it <= opt.newton_max_iter; ++it) {
    if (nr <= opt.refine_tol) return {true, z, nr};
    if (it == opt.newton_max_iter) break;
    for (std::size_t j = 0; j < d; ++j) {
      std::vector<double> zp = z, zm = z;
      zp[j] = std::min(1.0, z[j] + opt.newton_step);
      zm[j] = std::max(0.0, z[j] - opt.newton_step);
      F(zp, rp);
      F(zm, rm);
      const double w = zp[j] - zm[j];
      for (std::size_t i = 0; i < d; ++i) {
        J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (rp[i] - rm[i]) / w;
      }
    }
    for (std::size_t i = 0; i < d; ++i) rhs(static_cast<Eigen::Index>(i)) = -r[i];
    const auto lu = J.fullPivLu();
    if (!lu.isInvertible()) break;
    const Eigen::VectorXd dz = lu.solve(rhs);
    if (!dz.allFinite()) break;
    bool accepted = false;
    double t = 1.0;
    for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
      zn = z;
      for (std::size_t i = 0; i < d; ++i) {
        zn[i] = std::clamp(z[i] + t * dz(static_cast<Eigen::Index>(i)), 0.0, 1.0);
      }
      F(zn, rn);
      const double nn = max_abs(rn);
      if (nn < nr) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    z = zn;
    r = rn;
    nr = max_abs(r);
  }
  return {false, z, nr};
}

bool brackets(Face& F, const std::vector<double>& lo, double width) {
  const std::size_t d = lo.size();
  std::vector<double> mn(d, INFINITY), mx(d, -INFINITY), r;
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    std::vector<double> z = lo;
    for (std::size_t k = 0; k < d; ++k) {
      if (mask & (std::size_t{1} << k)) z[k] = std::min(1.0, z[k] + width);
    }
    F(z, r);
    for (std::size_t k = 0; k < d; ++k) {
      mn[k] = std::min(mn[k], r[k]);
      mx[k] = std::max(mx[k], r[k]);
    }
  }
  for (std::size_t k = 0; k < d; ++k) {
    if (!(mn[k] <= 0.0 && mx[k] >= 0.0)) return false;
  }
  return true;
}

std::vector<double> centre(const std::vector<double>& lo, double width) {
  std::vector<double> c = lo;
  for (double& v : c) v = std::min(1.0, v + 0.5 * width);
  return c;
}

struct FallbackResult {
  std::vector<Polish> roots;
  bool unresolved = false;
  double residual = 0.0;
};

// Bisects the cell, keeping subcells whose corners still bracket every
// component, and retries Newton from the survivors every few levels.
FallbackResult subdivide(Face& F, const std::vector<double>& lo, double width,
                         const SolverOptions& opt) {
  const std::size_t d = lo.size();
  std::vector<std::vector<double>> cells{lo};
  FallbackResult out;
  for (int level = 1; width > 1e-13 && !cells.empty(); ++level) {
    width *= 0.5;
    std::vector<std::vector<double>> next;
    for (const auto& c : cells) {
      for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        std::vector<double> sub = c;
        for (std::size_t k = 0; k < d; ++k) {
          if (mask & (std::size_t{1} << k)) sub[k] += width;
        }
        if (brackets(F, sub, width)) next.push_back(std::move(sub));
        if (next.size() >= kBeamWidth) break;
      }
      if (next.size() >= kBeamWidth) break;
    }
    cells = std::move(next);
    if (level % 6 == 0) {
      for (const auto& c : cells) {
        Polish p = newton(F, centre(c, width), opt);
        if (p.converged) out.roots.push_back(std::move(p));
      }
      if (!out.roots.empty()) return out;
    }
  }
  if (cells.empty()) return out;
  std::vector<double> r;
  const std::vector<double> z = centre(cells.front(), width);
  F(z, r);
  const double nr = max_abs(r);
  if (nr <= kFallbackAccept) {
    out.roots.push_back({true, z, nr});
  } else {
    out.unresolved = true;
    out.residual = nr;
  }
  return out;
}

double scan_step(std::size_t d, const SolverOptions& opt) {
  if (d <= 1) return opt.grid_step;
  if (d == 2) return std::max(opt.grid_step, opt.scan_step_2d);
  return std::max(opt.grid_step, opt.scan_step_3d);
}

}  // namespace

bool insert_unique(std::vector<std::vector<double>>& set, const std::vector<double>& p,
                   double radius) {
  for (const auto& q : set) {
    if (max_dist(p, q) <= radius) return false;
  }
  set.push_back(p);
  return true;
}

FaceSearch enumerate_faces(std::size_t dims, const ResidualFn& residual,
                           const SolverOptions& opt,
                           const std::vector<std::string>& labels) {
  if (!(opt.grid_step > 0.0 && opt.grid_step <= 0.5)) {
    throw ValidationError("grid step must lie in (0, 0.5]");
  }
  if (!(opt.refine_tol > 0.0)) throw ValidationError("refine tolerance must be positive");
  FaceSearch out;
  const double merge = 10.0 * opt.refine_tol;
  std::vector<std::vector<double>> accepted;
  std::vector<double> r_full;

  for (const auto& pins : all_faces(dims)) {
    ++out.faces_examined;
    Face F(dims, pins, residual);
    const std::string label = face_label(pins, labels);
    const std::size_t d = F.dim();

    std::vector<Polish> roots;
    if (d == 0) {
      roots.push_back({true, {}, 0.0});
    } else {
      const double h = scan_step(d, opt);
      const auto n = static_cast<std::size_t>(std::ceil(1.0 / h - 1e-9));
      const double width = 1.0 / static_cast<double>(n);
      const std::size_t N = n + 1;
      std::size_t nodes = 1, cells = 1;
      for (std::size_t k = 0; k < d; ++k) {
        nodes *= N;
        cells *= n;
      }
      std::vector<double> vals(nodes * d);
      std::vector<double> z(d), r;
      for (std::size_t node = 0; node < nodes; ++node) {
        std::size_t c = node;
        for (std::size_t k = d; k-- > 0;) {
          z[k] = static_cast<double>(c % N) * width;
          c /= N;
        }
        F(z, r);
        std::copy(r.begin(), r.end(), vals.begin() + static_cast<std::ptrdiff_t>(node * d));
      }
      std::vector<std::size_t> idx(d);
      for (std::size_t cell = 0; cell < cells; ++cell) {
        std::size_t c = cell;
        for (std::size_t k = d; k-- > 0;) {
          idx[k] = c % n;
          c /= n;
        }
        bool candidate = true;
        for (std::size_t k = 0; k < d && candidate; ++k) {
          double mn = INFINITY, mx = -INFINITY;
          for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
            std::size_t node = 0;
            for (std::size_t j = 0; j < d; ++j) {
              node = node * N + idx[j] + ((mask >> j) & 1u);
            }
            const double v = vals[node * d + k];
            mn = std::min(mn, v);
            mx = std::max(mx, v);
          }
          candidate = mn <= 0.0 && mx >= 0.0;
        }
        if (!candidate) continue;
        std::vector<double> lo(d);
        for (std::size_t k = 0; k < d; ++k) lo[k] = static_cast<double>(idx[k]) * width;
        Polish p = newton(F, centre(lo, width), opt);
        if (p.converged) {
          roots.push_back(std::move(p));
          continue;
        }
        FallbackResult fb = subdivide(F, lo, width, opt);
        for (auto& q : fb.roots) roots.push_back(std::move(q));
        if (fb.unresolved) {
          UnresolvedFace u;
          u.face = label;
          u.lower = F.embed(lo);
          std::vector<double> hi = lo;
          for (double& v : hi) v = std::min(1.0, v + width);
          u.upper = F.embed(hi);
          u.residual = fb.residual;
          u.reason = "polish did not converge inside a bracketing cell";
          out.unresolved.push_back(std::move(u));
        }
      }
    }

    // Verify, deduplicate within the face, then against earlier faces.
    std::vector<FacePoint> found;
    std::vector<std::vector<double>> local;
    const double snap = d == 0 ? 0.0 : std::max(merge, scan_step(d, opt));
    for (const Polish& p : roots) {
      std::vector<double> point = F.embed(p.z);
      for (std::size_t i = 0; i < dims; ++i) {
        if (pins[i] != Pin::Free) continue;
        for (double edge : {0.0, 1.0}) {
          if (std::abs(point[i] - edge) <= snap && point[i] != edge) {
            std::vector<double> snapped = point;
            snapped[i] = edge;
            F.full_residual(snapped, r_full);
            if (std::abs(r_full[i]) <= opt.tol) point = std::move(snapped);
          }
        }
      }
      F.full_residual(point, r_full);
      if (!F.pinned_ok(r_full, opt.tol)) continue;
      double worst = 0.0;
      bool ok = true;
      for (std::size_t i = 0; i < dims; ++i) {
        if (pins[i] != Pin::Free) continue;
        worst = std::max(worst, std::abs(r_full[i]));
        if (std::abs(r_full[i]) > std::max(opt.tol, kFallbackAccept)) ok = false;
      }
      if (!ok) continue;
      if (!insert_unique(local, point, merge)) continue;
      found.push_back({point, label, worst, false});
    }
    if (found.size() > opt.family_threshold) {
      std::sort(found.begin(), found.end(),
                [](const FacePoint& a, const FacePoint& b) { return a.eta < b.eta; });
      FacePoint first = found.front();
      FacePoint last = found.back();
      first.family = last.family = true;
      found = {first, last};
    }
    for (FacePoint& p : found) {
      if (insert_unique(accepted, p.eta, merge)) out.points.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<std::vector<double>> deterministic_starts(std::size_t dims) {
  std::vector<std::vector<double>> starts;
  std::size_t grid = 1;
  for (std::size_t i = 0; i < dims && grid <= 9; ++i) grid *= 3;
  if (grid <= 9) {
    for (std::size_t code = 0; code < grid; ++code) {
      std::vector<double> p(dims);
      std::size_t c = code;
      for (std::size_t i = dims; i-- > 0;) {
        p[i] = 0.5 * static_cast<double>(c % 3);
        c /= 3;
      }
      starts.push_back(std::move(p));
    }
    return starts;
  }
  for (std::size_t mask = 0; mask < 8; ++mask) {
    std::vector<double> p(dims, 0.0);
    for (std::size_t i = 0; i < dims; ++i) {
      // Spread the eight corners over all coordinates.
      p[i] = ((mask >> (i % 3)) & 1u) ? 1.0 : 0.0;
    }
    starts.push_back(std::move(p));
  }
  starts.emplace_back(dims, 0.5);
  return starts;
}

IterationResult iterate_best_response(std::size_t dims, const ResponseFn& response,
                                      const SolverOptions& opt) {
  if (!(opt.damping > 0.0 && opt.damping <= 1.0)) {
    throw ValidationError("damping must lie in (0, 1]");
  }
  std::vector<std::vector<double>> starts = deterministic_starts(dims);
  std::mt19937_64 rng(opt.seed);
  for (std::size_t s = 0; s < opt.random_starts; ++s) {
    std::vector<double> p(dims);
    for (double& v : p) v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    starts.push_back(std::move(p));
  }

  IterationResult out;
  out.starts = starts.size();
  std::vector<double> b;
  for (std::vector<double> x : starts) {
    double step = INFINITY;
    for (std::size_t it = 0; it < opt.max_iter; ++it) {
      response(x, b);
      step = 0.0;
      for (std::size_t i = 0; i < dims; ++i) {
        const double nx = (1.0 - opt.damping) * x[i] + opt.damping * b[i];
        step = std::max(step, std::abs(nx - x[i]));
        x[i] = nx;
      }
      if (step < opt.iteration_tol) break;
    }
    if (step < opt.iteration_tol) {
      ++out.converged;
      insert_unique(out.fixed_points, x, 10.0 * std::max(opt.iteration_tol, opt.refine_tol));
    } else {
      out.stalled_residuals.push_back(step);
    }
  }
  return out;
}

}  // namespace tcstop::detail
