#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles/paper_chains.hpp"
#include "oracles/random_models.hpp"
#include "tcstop/error.hpp"
#include "tcstop/pure_stopping.hpp"

using namespace tcstop;

namespace {

StoppingRegion ids(const MarkovModel& m, std::initializer_list<const char*> list) {
  std::vector<StateIndex> v;
  for (const char* id : list) v.push_back(m.require_index(id));
  return StoppingRegion(std::move(v)).normalized(m);
}

}  // namespace

TEST_CASE("four candidate regions on the five-state cycle") {
  const auto m = oracle::chain("cycle5");
  const auto one = m.require_index("1");
  const auto six = m.require_index("6");

  auto e1 = evaluate_region(m, one, ids(m, {"0", "1", "3", "6", "10"}), HitFrom::One);
  CHECK(e1.mean == doctest::Approx(4.4).epsilon(1e-13));
  CHECK(e1.second_moment == doctest::Approx(30.8).epsilon(1e-13));
  CHECK(std::abs(e1.k_value - 1.0177) < 1e-3);

  auto e2 = evaluate_region(m, six, ids(m, {"0", "3", "6", "10"}), HitFrom::One);
  CHECK(std::abs(e2.k_value - 6.1771) < 1e-3);
  auto e3 = evaluate_region(m, six, ids(m, {"0", "1", "3", "10"}), HitFrom::One);
  CHECK(std::abs(e3.k_value - 4.6) < 1e-12);
  auto e4 = evaluate_region(m, one, ids(m, {"0", "3", "10"}), HitFrom::One);
  CHECK(e4.second_moment == doctest::Approx(165.0 / 4.0).epsilon(1e-13));
  CHECK(std::abs(e4.k_value - 0.9689) < 1e-3);

  CHECK(enumerate_pure_equilibria(m, Criterion::MeanStd).empty());
}

TEST_CASE("three-state walk has the single equilibrium {0,2}") {
  const auto m = oracle::chain("three_state");
  const auto eq = enumerate_pure_equilibria(m, Criterion::MeanStd);
  REQUIRE(eq.size() == 1);
  CHECK(eq[0] == ids(m, {"0", "2"}));

  const auto v = is_equilibrium_region(m, eq[0], Criterion::MeanStd);
  CHECK(v.equilibrium);
  const auto& mg = v.margins[m.require_index("1")];
  CHECK_FALSE(mg.in_region);
  CHECK(std::abs(mg.continuation - (4.0 / 3.0 - std::sqrt(2.0) / 6.0)) < 1e-12);
  CHECK(mg.satisfied);

  const auto all = is_equilibrium_region(m, StoppingRegion::all_states(m), Criterion::MeanStd);
  CHECK_FALSE(all.equilibrium);
  CHECK(std::abs(all.margins[1].continuation - (1.2 - std::sqrt(14.0) / 20.0)) < 1e-12);
}

TEST_CASE("static optimum ties are both reported") {
  const auto m = oracle::chain("blend4");
  const auto best = static_optimum(m, m.require_index("1"), Criterion::MeanStd);
  const double c = 1.0 / (std::sqrt(44.0) - 5.0);
  CHECK(std::abs(best.value - (2.0 - c)) < 1e-12);
  REQUIRE(best.maximizers.size() == 2);
  CHECK(best.maximizers[0] == ids(m, {"0", "3"}));
  CHECK(best.maximizers[1] == ids(m, {"0", "2", "3"}));
  CHECK(best.regions_searched == 4);
}

TEST_CASE("static optimum matches brute force over evaluate_region") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const auto m = oracle::random_chain(rng, 6, 2, 0.3 + oracle::uniform01(rng));
    for (Criterion crit : {Criterion::MeanStd, Criterion::MeanVariance}) {
      const StateIndex start = 2 + static_cast<StateIndex>(rng() % 4);
      double best = -INFINITY;
      for (const auto& s : all_normalized_regions(m)) {
        best = std::max(best, evaluate_region(m, start, s, HitFrom::Zero).value(crit));
      }
      const auto opt = static_optimum(m, start, crit);
      CHECK(opt.value == doctest::Approx(best).epsilon(1e-12));
      CHECK_FALSE(opt.maximizers.empty());
    }
  }
}

TEST_CASE("equilibrium regions satisfy the margin conditions") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const auto m = oracle::random_chain(rng, 5, 2, 0.2 + oracle::uniform01(rng));
    for (const auto& s : enumerate_pure_equilibria(m, Criterion::MeanStd)) {
      for (const auto& mg : is_equilibrium_region(m, s, Criterion::MeanStd).margins) {
        if (m.is_absorbing(mg.state)) continue;
        if (mg.in_region) CHECK(mg.continuation <= mg.value + 1e-9);
        else CHECK(mg.continuation >= mg.value - 1e-9);
      }
    }
  }
}

TEST_CASE("region enumeration has a capacity") {
  std::vector<std::vector<double>> rows(30, std::vector<double>(30, 0.0));
  std::vector<double> v(30);
  rows[0][0] = 1.0;
  for (std::size_t x = 1; x < 30; ++x) {
    rows[x][0] = 0.5;
    rows[x][x - 1] += 0.5;
    v[x] = static_cast<double>(x);
  }
  const auto m = make_model("long", v, rows, 1.0);
  CHECK_THROWS_AS(enumerate_pure_equilibria(m, Criterion::MeanStd), CapacityError);
}
