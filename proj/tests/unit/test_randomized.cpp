#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles/paper_chains.hpp"
#include "oracles/path_sum.hpp"
#include "oracles/random_models.hpp"
#include "tcstop/pure_stopping.hpp"
#include "tcstop/randomized.hpp"

using namespace tcstop;

TEST_CASE("stopped moments against forward enumeration") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const auto m = oracle::random_chain(rng, 5, 2, 1.0);
    const auto p = oracle::random_randomized(rng, m);
    const auto mom = stopped_moments(m, p);
    for (StateIndex x = 0; x < m.size(); ++x) {
      const auto ref = oracle::randomized_path_sum(m, x, p.p);
      CHECK(mom.mean[x] == doctest::Approx(ref.mean).epsilon(1e-9));
      CHECK(mom.second[x] == doctest::Approx(ref.second).epsilon(1e-9));
      CHECK(mom.second[x] >= mom.mean[x] * mom.mean[x] - 1e-12);
    }
  }
}

TEST_CASE("immediate stopping and indicator strategies") {
  const auto m = oracle::chain("cycle5");
  const auto ones = RandomizedStrategy::normalized(m, std::vector<double>(m.size(), 1.0));
  const auto mom = stopped_moments(m, ones);
  for (StateIndex x = 0; x < m.size(); ++x) {
    CHECK(mom.mean[x] == doctest::Approx(m.values[x]));
    CHECK(mom.second[x] == doctest::Approx(m.values[x] * m.values[x]));
  }
  const StoppingRegion s = StoppingRegion({0, 2, 4});
  const auto ind = stopped_moments(m, RandomizedStrategy::indicator(m, s));
  for (StateIndex x = 0; x < m.size(); ++x) {
    const auto ev = evaluate_region(m, x, s, HitFrom::Zero);
    CHECK(std::abs(ind.mean[x] - ev.mean) < 1e-10);
    CHECK(std::abs(ind.second[x] - ev.second_moment) < 1e-10);
  }
}

TEST_CASE("absorbing states are forced to stop") {
  const auto m = oracle::chain("three_state");
  const auto p = RandomizedStrategy::normalized(m, {0.0, 0.5, 0.0});
  CHECK(p.p[0] == 1.0);
  CHECK(p.p[2] == 1.0);
  CHECK(p.p[1] == 0.5);
}

TEST_CASE("deviation value at the endpoints") {
  const auto m = oracle::chain("cycle5");
  const auto all = RandomizedStrategy::normalized(m, std::vector<double>(m.size(), 1.0));
  const StateIndex one = m.require_index("1");
  CHECK(evaluate_K_r(m, one, 1.0, all) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(evaluate_K_r(m, one, 0.0, all) - 1.0177) < 1e-3);
}

TEST_CASE("closed-form best deviation matches a fine grid") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const auto m = oracle::random_chain(rng, 4, 1, 0.2 + 1.5 * oracle::uniform01(rng));
    const auto p = oracle::random_randomized(rng, m);
    for (Criterion crit : {Criterion::MeanStd, Criterion::MeanVariance}) {
      for (StateIndex x = 1; x < m.size(); ++x) {
        double grid = -INFINITY;
        for (int i = 0; i <= 10000; ++i) grid = std::max(grid, evaluate_K_r(m, x, i / 10000.0, p, crit));
        const auto best = best_deviation_randomized(m, x, p, crit);
        CHECK(best.value >= grid - 1e-9);
        CHECK(best.value <= grid + 1e-6);
        CHECK(best.value == doctest::Approx(evaluate_K_r(m, x, best.q, p, crit)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("interior randomization on a transient state is never an equilibrium") {
  for (const auto& [name, m] : oracle::paper_chains()) {
    const auto cls = classify_states(m);
    for (StateIndex x : cls.transient) {
      for (int k = 1; k < 20; ++k) {
        std::vector<double> p(m.size(), 0.0);
        for (StateIndex y : cls.transient) p[y] = (y * 7 + k) % 2 ? 1.0 : 0.0;
        p[x] = k / 20.0;
        CAPTURE(name);
        CHECK_FALSE(is_equilibrium_randomized(m, RandomizedStrategy::normalized(m, p)).equilibrium);
      }
    }
  }
}

TEST_CASE("pure equilibria embed as randomized equilibria") {
  for (const auto& [name, m] : oracle::paper_chains()) {
    for (const auto& s : enumerate_pure_equilibria(m, Criterion::MeanStd)) {
      CAPTURE(name);
      CHECK(is_equilibrium_randomized(m, RandomizedStrategy::indicator(m, s)).equilibrium);
    }
  }
}

TEST_CASE("stopping everywhere on the three-state walk is not an equilibrium") {
  const auto m = oracle::chain("three_state");
  const auto v = is_equilibrium_randomized(m, RandomizedStrategy::indicator(m, StoppingRegion::all_states(m)));
  CHECK_FALSE(v.equilibrium);
  CHECK(v.states[1].q == doctest::Approx(0.0));
}

TEST_CASE("branch mixture variance chain") {
  const auto m = oracle::chain("three_state");
  const StateIndex one = m.require_index("1");
  MixtureSpec spec{RandomizedStrategy::indicator(m, StoppingRegion::all_states(m)),
                   RandomizedStrategy::indicator(m, StoppingRegion({0, 2})), 0.5};
  const auto a = mixture_variance_audit(m, one, spec);
  CHECK(a.ordered);
  CHECK(a.mean_first == doctest::Approx(1.0));
  CHECK(a.mean_second == doctest::Approx(4.0 / 3.0));
  CHECK(a.lhs > a.middle);
  CHECK(a.middle > a.rhs);
  CHECK_FALSE(a.means_equal);

  MixtureSpec same{spec.second, spec.second, 0.3};
  const auto b = mixture_variance_audit(m, one, same);
  CHECK(b.lhs == doctest::Approx(b.middle));
  CHECK(b.middle == doctest::Approx(b.rhs));
  CHECK(b.lhs_equals_middle);
  CHECK(b.middle_equals_rhs);
}
