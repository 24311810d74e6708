#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles/paper_chains.hpp"
#include "oracles/random_models.hpp"
#include "tcstop/liquidation.hpp"
#include "tcstop/mean_variance.hpp"
#include "tcstop/pure_stopping.hpp"

using namespace tcstop;

TEST_CASE("no pure equilibrium on the counterexample chain") {
  const auto m = oracle::chain("mv4");
  CHECK(m.c == doctest::Approx(21.0 / 50));
  CHECK(enumerate_pure_equilibria_mv(m).empty());
  const StateIndex one = m.require_index("1");
  const StateIndex two = m.require_index("2");
  auto j = [&](StateIndex x, std::initializer_list<const char*> ids) {
    std::vector<StateIndex> members;
    for (const char* id : ids) members.push_back(m.require_index(id));
    return evaluate_region_mv(m, x, StoppingRegion(members).normalized(m), HitFrom::One).j_value;
  };
  const double values[] = {j(one, {"0", "1", "2", "3"}), j(two, {"0", "2", "3"}),
                           j(two, {"0", "1", "3"}), j(one, {"0", "3"})};
  const double expected[] = {76.0 / 75, 1466.0 / 675, 147.0 / 75, 633.0 / 640};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(values[i] - expected[i]) < 1e-12);
}

TEST_CASE("pure equilibrium that fails as a liquidation equilibrium") {
  const auto m = oracle::chain("three_state").with_risk_aversion(0.25);
  const auto pure = enumerate_pure_equilibria_mv(m);
  REQUIRE(pure.size() == 1);
  const StateIndex one = m.require_index("1");
  CHECK(std::abs(evaluate_region_mv(m, one, pure[0], HitFrom::One).j_value - 10.0 / 9) < 1e-12);
  const auto eta = LiquidationStrategy::indicator(m, pure[0]);
  const auto br = mv_best_response(m, eta);
  CHECK(std::abs(br.states[one].response - 0.25) < 1e-9);
  CHECK(std::abs(br.states[one].best_value - 9.0 / 8) < 1e-9);
  CHECK_FALSE(is_equilibrium_liq_mv(m, eta).equilibrium);
}

TEST_CASE("quadratic form of the deviation value") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = oracle::random_chain(rng, 4, 1, 0.1 + oracle::uniform01(rng));
    const auto s = oracle::random_liquidation(rng, m);
    const auto mom = liquidation_moments(m, s);
    for (StateIndex x = 0; x < m.size(); ++x) {
      const double xi = oracle::uniform01(rng);
      const double e = mom.cont_mean[x];
      const double var = mom.cont_variance[x];
      const double cv = m.c * var;
      const double quad = -cv * xi * xi + (2 * cv - e + m.values[x]) * xi + e - cv;
      CHECK(std::abs(evaluate_J_l(m, x, xi, s).j_value - quad) < 1e-12 * std::max(1.0, std::abs(quad)));
    }
  }
}

TEST_CASE("best response matches a grid argmax") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = oracle::random_chain(rng, 4, 1, 0.05 + oracle::uniform01(rng));
    const auto s = oracle::random_liquidation(rng, m);
    const auto br = mv_best_response(m, s);
    for (StateIndex x = 0; x < m.size(); ++x) {
      if (m.is_absorbing(x)) continue;
      double best = -INFINITY;
      for (int i = 0; i <= 10000; ++i) best = std::max(best, evaluate_J_l(m, x, i / 1e4, s).j_value);
      CHECK(br.states[x].best_value >= best - 1e-9);
      CHECK(br.states[x].best_value <= best + 1e-6);
    }
  }
}

TEST_CASE("value at a fixed point is never below stopping") {
  for (const char* name : {"cycle5_alt", "stay4"}) {
    const auto m = oracle::chain(name);
    const auto report = solve_equilibria_liq_mv(m);
    REQUIRE(!report.equilibria.empty());
    for (const auto& e : report.equilibria) {
      const auto verdict = is_equilibrium_liq_mv(m, e.strategy);
      CHECK(verdict.equilibrium);
      for (StateIndex x = 0; x < m.size(); ++x) {
        CHECK(e.values[x] >= m.values[x] - 1e-9);
        double grid = -INFINITY;
        for (int i = 0; i <= 10000; ++i) {
          grid = std::max(grid, evaluate_J_l(m, x, i / 1e4, e.strategy).j_value);
        }
        CHECK(e.values[x] >= grid - 1e-7);
      }
    }
  }
}

TEST_CASE("no scaling invariance") {
  const auto m = oracle::chain("cycle5_alt");
  const auto s = LiquidationStrategy::normalized(m, std::vector<double>(m.size(), 0.5));
  const StateIndex one = m.require_index("1");
  const double h = mv_best_response(m, s).states[one].h;
  const double h2 = mv_best_response(m.scaled(2.0), s).states[one].h;
  CHECK(std::abs(h - h2) > 1e-3);
}

TEST_CASE("degenerate continuation") {
  const auto m = make_model("drop", {0.0, 5.0}, {{1.0, 0.0}, {1.0, 0.0}}, 1.0);
  const auto s = LiquidationStrategy::normalized(m, {1.0, 0.0});
  const auto br = mv_best_response(m, s);
  CHECK(br.states[1].degenerate);
  CHECK(br.states[1].response == 1.0);
  const auto all = LiquidationStrategy::normalized(m, {1.0, 1.0});
  CHECK(is_equilibrium_liq_mv(m, all).equilibrium);

  const auto abs = make_model("absorbing", {1.0, 2.0}, {{1.0, 0.0}, {0.0, 1.0}}, 1.0);
  const auto report = solve_equilibria_liq_mv(abs);
  REQUIRE(report.equilibria.size() == 1);
  CHECK(report.equilibria[0].values == std::vector<double>{1.0, 2.0});
}

TEST_CASE("randomized mean-variance collapse") {
  const auto m = oracle::chain("three_state").with_risk_aversion(0.25);
  for (double p : {0.2, 0.5, 0.8}) {
    CHECK_FALSE(is_equilibrium_randomized_mv(m, RandomizedStrategy::normalized(m, {1.0, p, 1.0}))
                    .equilibrium);
  }
  const auto pure = enumerate_pure_equilibria_mv(m);
  REQUIRE(pure.size() == 1);
  CHECK(is_equilibrium_randomized_mv(m, RandomizedStrategy::indicator(m, pure[0])).equilibrium);
}
