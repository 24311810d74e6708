#pragma once

#include <functional>

#include "face_solver.hpp"
#include "tcstop/equilibrium.hpp"

namespace tcstop::detail {

using VerifyFn = std::function<bool(const LiquidationStrategy&)>;

/// Strategy with the transient states set from `free_eta`, 1 elsewhere.
LiquidationStrategy embed_transient(const MarkovModel& model,
                                    const std::vector<StateIndex>& transient,
                                    const std::vector<double>& free_eta);

EquilibriumPoint make_point(const MarkovModel& model, const LiquidationStrategy& eta,
                            Criterion criterion, double tol);

/// Exhaustive face search up to the transient cap (plus best-response
/// iteration when `iterate_always`), iteration only above it.
EquilibriumReport solve_generic(const MarkovModel& model, Criterion criterion,
                                const SolverOptions& options, const ResidualFn& residual,
                                const ResponseFn& response, const VerifyFn& verify,
                                bool iterate_always);

}  // namespace tcstop::detail
