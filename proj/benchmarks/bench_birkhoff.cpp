#include "dsgso/birkhoff.hpp"

#include "support/generators.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace dsgso;

void BM_BirkhoffDense(benchmark::State& state) {
  testing::Rng rng(6);
  const DSOperator op = testing::random_operator(rng, state.range(0));
  Index terms = 0;
  for (auto _ : state) {
    const auto d = birkhoff_decompose(op);
    terms = d.count();
    benchmark::DoNotOptimize(d.terms.data());
  }
  state.counters["terms"] = static_cast<double>(terms);
}
BENCHMARK(BM_BirkhoffDense)->DenseRange(4, 32, 4)->Unit(benchmark::kMicrosecond);

}  // namespace
