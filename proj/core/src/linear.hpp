#pragma once

#include <Eigen/Dense>

namespace tcstop::detail {

/// Solves u = rhs + diag(keep) * P * u, i.e. (I - diag(keep) P) u = rhs.
/// With keep(x) = 0 on every absorbing state the matrix diag(keep) P is
/// substochastic with spectral radius < 1, so the system is nonsingular.
inline Eigen::VectorXd solve_discounted(const Eigen::MatrixXd& P,
                                        const Eigen::VectorXd& keep,
                                        const Eigen::VectorXd& rhs) {
  Eigen::MatrixXd A = -(keep.asDiagonal() * P);
  A.diagonal().array() += 1.0;
  return A.partialPivLu().solve(rhs);
}

}  // namespace tcstop::detail
