#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "oracles/paper_chains.hpp"
#include "oracles/random_models.hpp"
#include "tcstop/equilibrium.hpp"
#include "tcstop/error.hpp"
#include "tcstop/liquidation.hpp"

using namespace tcstop;

TEST_CASE("every paper chain has an equilibrium") {
  for (const auto& [name, m] : oracle::paper_chains()) {
    const auto report = solve_equilibria_liq(m);
    INFO(name);
    CHECK(report.complete);
    CHECK(!report.equilibria.empty());
    for (const auto& e : report.equilibria) CHECK(is_equilibrium_liq(m, e.strategy).equilibrium);
  }
}

TEST_CASE("existence on random four-state chains") {
  std::mt19937_64 rng(1234);
  int solved = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double c = std::array{0.1, 0.5, 1.0}[trial % 3];
    const auto m = oracle::random_chain(rng, 4, 1 + trial % 2, c);
    const auto report = solve_equilibria_liq(m);
    INFO(trial);
    CHECK(!report.equilibria.empty());
    for (const auto& e : report.equilibria) {
      CHECK(is_equilibrium_liq(m, e.strategy).equilibrium);
      for (StateIndex x = 0; x < m.size(); ++x) {
        const double k = evaluate_K_l(m, x, e.strategy.eta[x], e.strategy);
        CHECK(std::abs(k - std::max(m.values[x], continuation_value(m, e.strategy, x))) < 1e-9);
      }
    }
    solved += !report.equilibria.empty();
  }
  CHECK(solved == 100);
}

TEST_CASE("interior root of the two-cycle chain") {
  const auto m = oracle::chain("cycle5");
  const auto report = solve_equilibria_liq(m);
  REQUIRE(report.equilibria.size() == 1);
  const auto& e = report.equilibria.front();
  const StateIndex one = m.require_index("1");
  const StateIndex six = m.require_index("6");
  CHECK(e.classes[one] == StateClass::Interior);
  CHECK(e.classes[six] == StateClass::Interior);
  CHECK(std::abs(continuation_value(m, e.strategy, one) - 1.0) < 1e-8);
  CHECK(std::abs(continuation_value(m, e.strategy, six) - 6.0) < 1e-8);
  CHECK(report.optimal.has_value());
  CHECK(report.pareto_set.size() == 1);
}

TEST_CASE("selection on the stay chain") {
  const auto m = oracle::chain("stay4");
  auto report = solve_equilibria_liq(m);
  CHECK(report.equilibria.size() == 5);
  const auto opt = select_optimal(m, report);
  CHECK_FALSE(opt.index.has_value());
  const auto par = select_pareto(m, report);
  CHECK(par.pareto.size() == 2);
  REQUIRE(par.sum_maximizer.has_value());
  bool sum_in_pareto = false;
  for (auto i : par.pareto) sum_in_pareto = sum_in_pareto || i == *par.sum_maximizer;
  CHECK(sum_in_pareto);
}

TEST_CASE("all-absorbing chain is trivially solved") {
  const auto m = make_model("flat", {1.0, 2.0}, {{1.0, 0.0}, {0.0, 1.0}}, 1.0);
  const auto report = solve_equilibria_liq(m);
  REQUIRE(report.equilibria.size() == 1);
  CHECK(report.equilibria[0].values == std::vector<double>{1.0, 2.0});
  CHECK(report.optimal == std::optional<std::size_t>{0});
}

TEST_CASE("exhaustive search respects its capacity") {
  std::mt19937_64 rng(3);
  const auto m = oracle::random_chain(rng, 6, 1, 0.5);
  SolverOptions opt;
  opt.max_exhaustive_transient = 2;
  const auto report = solve_equilibria_liq(m, opt);
  CHECK_FALSE(report.exhaustive);
  CHECK_FALSE(report.complete);
  for (const auto& e : report.equilibria) CHECK(is_equilibrium_liq(m, e.strategy).equilibrium);
}

TEST_CASE("surface contours") {
  const auto cyc = oracle::chain("cycle5");
  const auto base = LiquidationStrategy::normalized(cyc, std::vector<double>(cyc.size(), 0.0));
  const std::vector<StateIndex> free{cyc.require_index("1"), cyc.require_index("6")};
  const auto grid = continuation_surface(cyc, base, free, 0.01);
  CHECK(grid.node_count() == 101 * 101);
  CHECK(contour_intersections(grid, 0, 1, 0.02).size() == 1);

  const auto stay = oracle::chain("stay4");
  const auto sbase = LiquidationStrategy::normalized(stay, std::vector<double>(stay.size(), 0.0));
  const auto sgrid = continuation_surface(
      stay, sbase, {stay.require_index("11"), stay.require_index("17")}, 0.01);
  CHECK(contour_intersections(sgrid, 0, 1, 0.02).empty());

  auto flat = make_model("flat", {3.0, 4.0, 5.0, 6.0},
                         {{1, 0, 0, 0}, {0, 0.5, 0.5, 0}, {0, 0.5, 0, 0.5}, {0, 0, 0, 1}}, 1.0);
  flat.values.assign(4, 3.0);
  const auto fbase = LiquidationStrategy::normalized(flat, std::vector<double>(4, 0.0));
  const auto fgrid = continuation_surface(flat, fbase, {1, 2}, 0.1, {1, 2});
  for (bool f : fgrid.flat) CHECK(f);

  CHECK_THROWS_AS(continuation_surface(cyc, base, {1, 2, 3}, 0.1), CapacityError);
}
