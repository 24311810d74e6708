#pragma once

// Generic equilibrium search over [0,1]^T.
//
// The residual r(eta) has one component per coordinate with the sign
// convention: r_k > 0 pushes coordinate k toward 0, r_k < 0 toward 1. A point
// is an equilibrium when every coordinate pinned at 0 has r_k >= -tol, every
// coordinate pinned at 1 has r_k <= tol, and every free coordinate has
// r_k == 0.

#include <functional>
#include <string>
#include <vector>

#include "tcstop/equilibrium.hpp"

namespace tcstop::detail {

using ResidualFn = std::function<void(const std::vector<double>&, std::vector<double>&)>;
using ResponseFn = std::function<void(const std::vector<double>&, std::vector<double>&)>;

struct FacePoint {
  std::vector<double> eta;
  std::string face;
  double residual = 0.0;
  bool family = false;
};

struct FaceSearch {
  std::vector<FacePoint> points;
  std::vector<UnresolvedFace> unresolved;
  std::size_t faces_examined = 0;
};

FaceSearch enumerate_faces(std::size_t dims, const ResidualFn& residual,
                           const SolverOptions& options,
                           const std::vector<std::string>& labels);

struct IterationResult {
  std::vector<std::vector<double>> fixed_points;
  std::size_t starts = 0;
  std::size_t converged = 0;
  /// Final max |step| for each start that did not converge.
  std::vector<double> stalled_residuals;
};

/// eta <- (1-d) eta + d response(eta) from the deterministic and seeded
/// random starts; fixed points are deduplicated within 10 * iteration_tol.
IterationResult iterate_best_response(std::size_t dims, const ResponseFn& response,
                                      const SolverOptions& options);

/// {0, 1/2, 1}^T when that has at most nine points, else the first eight
/// corners and the centre.
std::vector<std::vector<double>> deterministic_starts(std::size_t dims);

/// Appends `p` unless a point within `radius` (max-norm) is already present.
bool insert_unique(std::vector<std::vector<double>>& set, const std::vector<double>& p,
                   double radius);

}  // namespace tcstop::detail
