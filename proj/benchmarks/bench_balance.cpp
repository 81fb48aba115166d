#include "dsgso/balance.hpp"

#include "support/generators.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace dsgso;

void BM_SinkhornDense(benchmark::State& state) {
  testing::Rng rng(1);
  const Matrix w = testing::random_positive_matrix(rng, state.range(0));
  int sweeps = 0;
  for (auto _ : state) {
    BalanceResult r = sinkhorn_knopp(w);
    sweeps = r.op.iterations_used();
    benchmark::DoNotOptimize(r);
  }
  state.counters["sweeps"] = sweeps;
}
BENCHMARK(BM_SinkhornDense)->RangeMultiplier(4)->Range(16, 1024)->Unit(benchmark::kMicrosecond);

// Sparse kernel-like pattern: about 8 neighbours per row regardless of N.
void BM_SinkhornSparse(benchmark::State& state) {
  const Index n = state.range(0);
  testing::Rng rng(2);
  const Matrix w =
      testing::random_sparse_pattern(rng, n, 4.0 / static_cast<double>(n), Storage::kSparse);
  int sweeps = 0;
  for (auto _ : state) {
    BalanceResult r = sinkhorn_knopp(w);
    sweeps = r.op.iterations_used();
    benchmark::DoNotOptimize(r);
  }
  state.counters["sweeps"] = sweeps;
  state.counters["nnz"] = static_cast<double>(w.nonzeros());
}
BENCHMARK(BM_SinkhornSparse)->RangeMultiplier(4)->Range(256, 16384)->Unit(benchmark::kMillisecond);

}  // namespace
