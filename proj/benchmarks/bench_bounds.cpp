#include "dsgso/stat_bounds.hpp"

#include "support/generators.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace dsgso;

void BM_MonteCarlo(benchmark::State& state) {
  const DSOperator op = testing::uniform_operator(state.range(0));
  const auto model = RandomSignalModel::uniform({1.0, 2.0, 0.3});
  const MonteCarloOptions opt{10000, 42, static_cast<unsigned>(state.range(1)), {}};
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_shift_stats(op, 0, model, opt));
  state.SetItemsProcessed(state.iterations() * opt.trials);
}
BENCHMARK(BM_MonteCarlo)
    ->ArgsProduct({{16, 64, 256}, {1, 2}})
    ->ArgNames({"N", "threads"})
    ->UseRealTime()
    ->Unit(benchmark::kMillisecond);

void BM_ClosedFormBounds(benchmark::State& state) {
  testing::Rng rng(7);
  const DSOperator op = testing::random_operator(rng, state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_bounds_report(op, 0, {1.0, 2.0, 0.3}, std::nullopt));
  }
}
BENCHMARK(BM_ClosedFormBounds)->RangeMultiplier(4)->Range(16, 1024);

}  // namespace
