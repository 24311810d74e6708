#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles/paper_chains.hpp"
#include "oracles/random_models.hpp"
#include "tcstop/blend.hpp"
#include "tcstop/liquidation.hpp"
#include "tcstop/montecarlo.hpp"
#include "tcstop/pure_stopping.hpp"
#include "tcstop/randomized.hpp"

using namespace tcstop;

namespace {

void within(const SimEstimate& est, double mean, double variance, double k = 4.0) {
  CHECK(est.all_absorbed());
  CHECK(std::abs(est.mean - mean) <= k * est.se_mean + 1e-9);
  CHECK(std::abs(est.variance - variance) <= k * est.se_variance + 1e-9);
}

}  // namespace

TEST_CASE("identical configurations give identical estimates") {
  const auto m = oracle::chain("cycle5");
  const auto s = LiquidationStrategy::normalized(m, std::vector<double>(m.size(), 0.3));
  SimConfig cfg{.paths = 20000, .seed = 77, .start = m.require_index("1")};
  const auto a = simulate_liquidation(m, s, cfg);
  const auto b = simulate_liquidation(m, s, cfg);
  CHECK(a.mean == b.mean);
  CHECK(a.variance == b.variance);
  cfg.seed = 78;
  CHECK(simulate_liquidation(m, s, cfg).mean != a.mean);
}

TEST_CASE("immediate sale is degenerate") {
  const auto m = oracle::chain("cycle5");
  const auto ones = std::vector<double>(m.size(), 1.0);
  SimConfig cfg{.paths = 1000, .seed = 1, .start = m.require_index("6")};
  const auto l = simulate_liquidation(m, LiquidationStrategy::normalized(m, ones), cfg);
  CHECK(l.mean == 6.0);
  CHECK(l.variance == 0.0);
  const auto r = simulate_randomized(m, RandomizedStrategy::normalized(m, ones), cfg);
  CHECK(r.mean == 6.0);
  CHECK(r.variance == 0.0);
}

TEST_CASE("waiting on the three-state chain") {
  const auto m = oracle::chain("three_state");
  const auto s = LiquidationStrategy::normalized(m, {1.0, 0.0, 1.0});
  const auto est = simulate_liquidation(m, s, {.paths = 100000, .seed = 2018, .start = 1});
  within(est, 4.0 / 3, 8.0 / 9);
}

TEST_CASE("samples agree with the analytic engines") {
  std::mt19937_64 rng(2024);
  for (const auto& [name, m] : oracle::paper_chains()) {
    for (int trial = 0; trial < 2; ++trial) {
      const auto s = oracle::random_liquidation(rng, m);
      const auto mom = liquidation_moments(m, s);
      const auto sm = stopped_moments(m, RandomizedStrategy::normalized(m, s.eta));
      for (StateIndex x = 0; x < m.size(); ++x) {
        if (m.is_absorbing(x)) continue;
        const SimConfig cfg{.paths = 20000, .seed = 100u + x + 10u * trial, .start = x};
        INFO(name << " state " << m.state_ids[x]);
        within(simulate_liquidation(m, s, cfg), mom.value_mean[x],
               variance_from_moments(mom.value_mean[x], mom.value_second[x]), 5.0);
        within(simulate_randomized(m, RandomizedStrategy::normalized(m, s.eta), cfg), sm.mean[x],
               sm.variance(x), 5.0);
      }
    }
  }
}

TEST_CASE("randomized payoff spreads more than liquidation") {
  const auto m = oracle::chain("cycle5");
  const auto s = LiquidationStrategy::normalized(m, std::vector<double>(m.size(), 0.5));
  const SimConfig cfg{.paths = 100000, .seed = 12, .start = m.require_index("1")};
  const auto l = simulate_liquidation(m, s, cfg);
  const auto r = simulate_randomized(m, RandomizedStrategy::normalized(m, s.eta), cfg);
  CHECK(std::abs(l.mean - r.mean) <= 4.0 * std::hypot(l.se_mean, r.se_mean));
  CHECK(r.variance - l.variance > 4.0 * std::hypot(l.se_variance, r.se_variance));
}

TEST_CASE("hitting law by sampling") {
  const auto m = oracle::chain("cycle5");
  StoppingRegion s = StoppingRegion({m.require_index("3")}).normalized(m);
  const auto e = evaluate_region(m, m.require_index("1"), s, HitFrom::Zero);
  const auto est = simulate_randomized(m, RandomizedStrategy::indicator(m, s),
                                       {.paths = 100000, .seed = 5, .start = m.require_index("1")});
  within(est, e.mean, e.variance);
}

TEST_CASE("blend by sampling") {
  const auto m = oracle::chain("blend4");
  auto r = [&](std::initializer_list<const char*> ids) {
    std::vector<StateIndex> members;
    for (const char* id : ids) members.push_back(m.require_index(id));
    return StoppingRegion(members).normalized(m);
  };
  const ScriptedBlend blend{{0.5, 0.5}, {r({"2"}), r({})}};
  const auto law = scripted_blend_law(m, 1, blend);
  const auto est = simulate_blend(m, blend, {.paths = 100000, .seed = 9, .start = 1});
  within(est, 2.1, law.variance);

  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 5; ++trial) {
    const auto rm = oracle::random_chain(rng, 5, 2, 1.0);
    const ScriptedBlend rb{{0.3, 0.7}, {oracle::random_region(rng, rm), oracle::random_region(rng, rm)}};
    const auto rl = scripted_blend_law(rm, 3, rb);
    within(simulate_blend(rm, rb, {.paths = 20000, .seed = 40u + trial, .start = 3}), rl.mean,
           rl.variance, 5.0);
  }
}

TEST_CASE("summary statistics") {
  const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  const auto s = summarize(xs, 0);
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.variance == doctest::Approx(5.0 / 3));
  CHECK(s.se_mean == doctest::Approx(std::sqrt(5.0 / 3 / 4)));
  CHECK(s.absorbed_fraction == 1.0);
  const auto cut = summarize(xs, 1);
  CHECK_FALSE(cut.all_absorbed());
  CHECK(cut.absorbed_fraction == doctest::Approx(0.8));
}
