#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles/paper_chains.hpp"
#include "oracles/random_models.hpp"
#include "tcstop/blend.hpp"
#include "tcstop/error.hpp"
#include "tcstop/pure_stopping.hpp"

using namespace tcstop;

namespace {

StoppingRegion region(const MarkovModel& m, std::initializer_list<const char*> ids) {
  std::vector<StateIndex> members;
  for (const char* id : ids) members.push_back(m.require_index(id));
  return StoppingRegion(std::move(members)).normalized(m);
}

}  // namespace

TEST_CASE("half and half blend on the four-state chain") {
  const auto m = oracle::chain("blend4");
  const ScriptedBlend blend{{0.5, 0.5}, {region(m, {"0", "2", "3"}), region(m, {"0", "3"})}};
  const auto law = scripted_blend_law(m, m.require_index("1"), blend);
  REQUIRE(law.distribution.size() == 4);
  const std::pair<double, double> expected[] = {{0.0, 1.0 / 6}, {1.0, 0.1}, {2.5, 0.4}, {3.0, 1.0 / 3}};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(law.distribution[i].first - expected[i].first) < 1e-12);
    CHECK(std::abs(law.distribution[i].second - expected[i].second) < 1e-12);
  }
  CHECK(std::abs(law.mean - 2.1) < 1e-12);
  CHECK(std::abs(law.k_value - (2.1 - std::sqrt(119.0) / 10 * m.c)) < 1e-12);
}

TEST_CASE("blend variance sits below the mixed standard deviation") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = oracle::random_chain(rng, 5, 2, 1.0);
    const StateIndex start = 2 + rng() % 3;
    const std::size_t k = 2 + rng() % 2;
    ScriptedBlend blend;
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      blend.weights.push_back(0.05 + oracle::uniform01(rng));
      total += blend.weights.back();
      blend.regions.push_back(oracle::random_region(rng, m));
    }
    for (double& w : blend.weights) w /= total;
    const auto law = scripted_blend_law(m, start, blend);
    double sd_mix = 0.0, var_mix = 0.0, mean_mix = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const auto e = evaluate_region(m, start, blend.regions[i], HitFrom::Zero);
      sd_mix += blend.weights[i] * std::sqrt(e.variance);
      var_mix += blend.weights[i] * e.variance;
      mean_mix += blend.weights[i] * e.mean;
    }
    double mass = 0.0;
    for (const auto& [v, p] : law.distribution) mass += p;
    CHECK(std::abs(mass - 1.0) < 1e-12);
    CHECK(std::abs(law.mean - mean_mix) < 1e-10);
    CHECK(law.variance <= sd_mix * sd_mix + 1e-10);
    CHECK(sd_mix * sd_mix <= var_mix + 1e-10);
  }
}

TEST_CASE("single-region blend is the hitting law") {
  const auto m = oracle::chain("cycle5");
  const auto s = region(m, {"3"});
  const auto law = scripted_blend_law(m, m.require_index("1"), {{1.0}, {s}});
  const auto e = evaluate_region(m, m.require_index("1"), s, HitFrom::Zero);
  CHECK(std::abs(law.mean - e.mean) < 1e-12);
  CHECK(std::abs(law.variance - e.variance) < 1e-12);
}

TEST_CASE("blend validation") {
  const auto m = oracle::chain("blend4");
  const auto s = region(m, {"2"});
  CHECK_THROWS_AS(validate_blend(m, {{0.4, 0.4}, {s, s}}), ValidationError);
  CHECK_THROWS_AS(validate_blend(m, {{1.2, -0.2}, {s, s}}), ValidationError);
  CHECK_THROWS_AS(validate_blend(m, {{1.0}, {StoppingRegion({1})}}), ValidationError);
  CHECK_THROWS_AS(validate_blend(m, {{0.5}, {s, s}}), ValidationError);
}

TEST_CASE("lifted chain capacity") {
  std::mt19937_64 rng(4);
  const auto m = oracle::random_chain(rng, 30, 1, 1.0, 0.01);
  ScriptedBlend blend;
  for (int i = 0; i < 10; ++i) {
    blend.weights.push_back(0.1);
    std::vector<StateIndex> members{0};
    for (int j = 0; j < 3; ++j) members.push_back(1 + (3 * i + j) % 29);
    blend.regions.push_back(StoppingRegion(members).normalized(m));
  }
  CHECK_THROWS_AS(scripted_blend_law(m, 5, blend), CapacityError);
}
