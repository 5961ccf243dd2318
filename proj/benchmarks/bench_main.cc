// benchmarks/bench_main.cc

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <benchmark/benchmark.h>

BENCHMARK_MAIN();
