#include <benchmark/benchmark.h>

#include <random>

#include "oracles/paper_chains.hpp"
#include "oracles/random_models.hpp"
#include "tcstop/blend.hpp"
#include "tcstop/equilibrium.hpp"
#include "tcstop/liquidation.hpp"
#include "tcstop/mean_variance.hpp"
#include "tcstop/montecarlo.hpp"
#include "tcstop/pure_stopping.hpp"
#include "tcstop/randomized.hpp"

using namespace tcstop;

namespace {

MarkovModel random_model(std::size_t n) {
  std::mt19937_64 rng(n);
  return oracle::random_chain(rng, n, 2, 0.5);
}

void BM_LiquidationMoments(benchmark::State& state) {
  const auto m = random_model(static_cast<std::size_t>(state.range(0)));
  std::mt19937_64 rng(1);
  const auto s = oracle::random_liquidation(rng, m);
  for (auto _ : state) benchmark::DoNotOptimize(liquidation_moments(m, s));
}
BENCHMARK(BM_LiquidationMoments)->Arg(5)->Arg(20)->Arg(100);

void BM_StoppedMoments(benchmark::State& state) {
  const auto m = random_model(static_cast<std::size_t>(state.range(0)));
  std::mt19937_64 rng(2);
  const auto p = oracle::random_randomized(rng, m);
  for (auto _ : state) benchmark::DoNotOptimize(stopped_moments(m, p));
}
BENCHMARK(BM_StoppedMoments)->Arg(5)->Arg(20)->Arg(100);

void BM_PureEquilibria(benchmark::State& state) {
  const auto m = random_model(static_cast<std::size_t>(state.range(0)) + 2);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_pure_equilibria(m, Criterion::MeanStd));
}
BENCHMARK(BM_PureEquilibria)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_SolveCycle(benchmark::State& state) {
  const auto m = oracle::chain("cycle5");
  for (auto _ : state) benchmark::DoNotOptimize(solve_equilibria_liq(m));
}
BENCHMARK(BM_SolveCycle)->Unit(benchmark::kMillisecond);

void BM_SolveMeanVariance(benchmark::State& state) {
  const auto m = oracle::chain("cycle5_alt");
  for (auto _ : state) benchmark::DoNotOptimize(solve_equilibria_liq_mv(m));
}
BENCHMARK(BM_SolveMeanVariance)->Unit(benchmark::kMillisecond);

void BM_BlendLaw(benchmark::State& state) {
  const auto m = random_model(12);
  std::mt19937_64 rng(3);
  ScriptedBlend b;
  for (int i = 0; i < state.range(0); ++i) {
    b.weights.push_back(1.0 / static_cast<double>(state.range(0)));
    b.regions.push_back(oracle::random_region(rng, m));
  }
  for (auto _ : state) benchmark::DoNotOptimize(scripted_blend_law(m, 5, b));
}
BENCHMARK(BM_BlendLaw)->Arg(2)->Arg(3)->Arg(4);

void BM_SimulateLiquidation(benchmark::State& state) {
  const auto m = oracle::chain("cycle5");
  const auto s = LiquidationStrategy::normalized(m, std::vector<double>(m.size(), 0.3));
  const SimConfig cfg{.paths = 10000, .seed = 7, .start = m.require_index("1")};
  for (auto _ : state) benchmark::DoNotOptimize(simulate_liquidation(m, s, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.paths));
}
BENCHMARK(BM_SimulateLiquidation)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
