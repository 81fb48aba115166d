#include "dsgso/shift_filter.hpp"

#include "support/generators.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace dsgso;

void BM_ApplyShift(benchmark::State& state) {
  testing::Rng rng(3);
  const DSOperator op = testing::random_operator(rng, state.range(0));
  const GraphSignal x = testing::random_signal(rng, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(apply_shift(op, x));
  state.SetItemsProcessed(state.iterations() * op.matrix().nonzeros());
}
BENCHMARK(BM_ApplyShift)->RangeMultiplier(4)->Range(16, 1024);

// Horner evaluation: cost grows linearly in the filter order.
void BM_ApplyFilter(benchmark::State& state) {
  testing::Rng rng(4);
  const DSOperator op = testing::random_operator(rng, 256);
  const GraphSignal x = testing::random_signal(rng, 256);
  const FilterSpec f(std::vector<double>(static_cast<std::size_t>(state.range(0)) + 1, 0.5));
  for (auto _ : state) benchmark::DoNotOptimize(apply_filter(op, f, x));
}
BENCHMARK(BM_ApplyFilter)->DenseRange(1, 9, 2);

void BM_SpectralNorm(benchmark::State& state) {
  testing::Rng rng(5);
  const DSOperator op = testing::random_operator(rng, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(matrix_norm(op.matrix(), NormType::kL2));
}
BENCHMARK(BM_SpectralNorm)->RangeMultiplier(4)->Range(16, 1024)->Unit(benchmark::kMicrosecond);

}  // namespace
