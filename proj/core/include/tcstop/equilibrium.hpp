#pragma once

// Equilibrium search over liquidation strategies and the resulting report.
//
// Exhaustive mode walks every face of the hypercube [0,1]^T over the T
// transient states. Each transient state is pinned to 0, pinned to 1 or left
// free; on a face the free coordinates must solve the equilibrium equations
// (located by a grid scan and polished by Newton, with a subdivision
// fallback) while the pinned ones must satisfy the matching inequalities.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tcstop/criterion.hpp"
#include "tcstop/liquidation.hpp"
#include "tcstop/markov.hpp"

namespace tcstop {

struct SolverOptions {
  double grid_step = 1e-3;         ///< scan step on one-dimensional faces
  double refine_tol = 1e-10;       ///< root polish tolerance
  double tol = 1e-9;               ///< equality band of the equilibrium test
  std::size_t max_exhaustive_transient = 3;
  double scan_step_2d = 5e-3;      ///< floor on the scan step for 2-D faces
  double scan_step_3d = 2.5e-2;    ///< and for 3-D faces
  std::size_t family_threshold = 16;
  double newton_step = 1e-6;       ///< central-difference step for Jacobians
  std::size_t newton_max_iter = 60;

  // Best-response iteration (fallback for large instances, and the MV solver).
  double damping = 0.5;
  std::size_t max_iter = 10000;
  double iteration_tol = 1e-10;
  std::size_t random_starts = 16;
  std::uint64_t seed = 20240611;
};

struct EquilibriumPoint {
  LiquidationStrategy strategy;
  std::vector<double> values;        ///< K_l(x, eta) or J_l(x, eta)
  std::vector<double> continuation;  ///< g_x(eta) under the report criterion
  std::vector<StateClass> classes;
  std::vector<StateIndex> continuation_set;  ///< {x : v(x) < g_x(eta)}
  std::string face;                  ///< e.g. "1=I,6=0"
  double residual = 0.0;             ///< max |residual| on free coordinates
  bool family = false;               ///< representative of a continuum
  bool optimal = false;
  bool pareto = false;
  bool sum_maximizer = false;
};

struct UnresolvedFace {
  std::string face;
  std::vector<double> lower;
  std::vector<double> upper;
  double residual = 0.0;
  std::string reason;
};

struct EquilibriumReport {
  Criterion criterion = Criterion::MeanStd;
  std::vector<StateIndex> transient;
  std::vector<EquilibriumPoint> equilibria;
  std::vector<UnresolvedFace> unresolved;
  bool exhaustive = false;
  /// false when the search was heuristic, a face was unresolved, or an
  /// exhaustive search came back empty.
  bool complete = false;
  std::size_t faces_examined = 0;
  std::vector<std::string> notes;

  std::optional<std::size_t> optimal;  ///< first optimal equilibrium
  std::vector<std::size_t> optimal_set;
  std::vector<std::size_t> pareto_set;
  std::optional<std::size_t> sum_maximizer;
};

/// All mean-standard deviation equilibrium liquidation strategies.
EquilibriumReport solve_equilibria_liq(const MarkovModel& model,
                                       const SolverOptions& options = {});

struct OptimalSelection {
  std::optional<std::size_t> index;   ///< an equilibrium dominating all others
  std::vector<std::size_t> all;       ///< every such equilibrium
  /// For each entry of `all`: C(eta*) equals the union of all C(eta).
  std::vector<bool> union_condition;
  bool union_condition_holds = false; ///< for `index`
};

/// Pointwise dominance within 1e-9.
OptimalSelection select_optimal(const MarkovModel& model,
                                const EquilibriumReport& report);

struct ParetoSelection {
  std::vector<std::size_t> pareto;
  std::optional<std::size_t> sum_maximizer;
};

ParetoSelection select_pareto(const MarkovModel& model,
                              const EquilibriumReport& report);

/// Fills the optimal/pareto flags of `report` in place.
void annotate_selection(const MarkovModel& model, EquilibriumReport& report);

/// Zero-level traces of g_x(eta) - v(x) over one or two free states.
struct ContourSegment {
  std::array<double, 2> from;
  std::array<double, 2> to;
};

struct SurfaceGrid {
  std::vector<StateIndex> free_states;   ///< 1 or 2 coordinates
  std::vector<StateIndex> watched;       ///< states whose g is recorded
  std::vector<double> axis;              ///< node coordinates along each axis
  /// values[w][node], node = i * axis.size() + j (row-major; i is coord 1).
  /// One-dimensional grids use node = i.
  std::vector<std::vector<double>> values;
  /// polylines[w] = list of polylines, each a list of points.
  std::vector<std::vector<std::vector<std::array<double, 2>>>> contours;
  /// flat[w]: g_w - v(w) vanishes at every node, so the whole grid is the level set.
  std::vector<bool> flat;

  std::size_t node_count() const;
};

/// Dense grid of continuation values with traced zero-level contours of
/// g_x - v(x) (marching squares). Throws CapacityError for > 2 free states.
SurfaceGrid continuation_surface(const MarkovModel& model,
                                 const LiquidationStrategy& base,
                                 const std::vector<StateIndex>& free_states,
                                 double grid_step,
                                 std::vector<StateIndex> watched = {},
                                 Criterion criterion = Criterion::MeanStd);

/// Intersection points between the traced contours of two watched states,
/// clustered within `merge_radius`.
std::vector<std::array<double, 2>> contour_intersections(const SurfaceGrid& grid,
                                                         std::size_t first,
                                                         std::size_t second,
                                                         double merge_radius);

}  // namespace tcstop
