#include <benchmark/benchmark.h>

// Own entry point: the distribution's benchmark_main archive is LTO bytecode
// tied to a different compiler release.
BENCHMARK_MAIN();
