// benchmarks/bench_metrics.cc

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <benchmark/benchmark.h>

#include "aamse/corpus/mix.h"
#include "aamse/corpus/synth.h"
#include "aamse/metrics/edit.h"
#include "aamse/metrics/stoi.h"

using namespace aamse;

namespace {

void BM_Stoi(benchmark::State& state) {
  corpus::SynthCorpus c = corpus::synth_corpus(1, 1.0, 1.0, 7);
  signal::Waveform noisy =
      corpus::mix_at_snr(c.items[0].clean, c.noises[0].wave, 0.0, 1);
  for (auto _ : state) {
    double s = metrics::stoi(c.items[0].clean, noisy);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_Stoi);

void BM_Levenshtein(benchmark::State& state) {
  Rng rng(8);
  std::string a, b;
  for (int i = 0; i < 64; ++i) {
    a.push_back(char('a' + rng.below(4)));
    b.push_back(char('a' + rng.below(4)));
  }
  for (auto _ : state) {
    size_t d = metrics::levenshtein(a, b);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_Levenshtein);

}  // namespace
