// benchmarks/bench_dsp.cc

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <benchmark/benchmark.h>

#include "aamse/corpus/mix.h"
#include "aamse/signal/stft.h"

using namespace aamse;

namespace {

signal::Waveform noise_second(uint64_t seed) {
  Rng rng(seed);
  signal::Waveform w;
  w.samples.resize(16000);
  for (auto& s : w.samples) s = rng.range(-0.3, 0.3);
  return w;
}

void BM_Stft(benchmark::State& state) {
  signal::Waveform w = noise_second(1);
  for (auto _ : state) {
    signal::Spectrogram sp = signal::stft(w);
    benchmark::DoNotOptimize(sp.log_mag.data().data());
  }
}
BENCHMARK(BM_Stft);

void BM_StftRoundTrip(benchmark::State& state) {
  signal::Waveform w = noise_second(2);
  for (auto _ : state) {
    signal::Waveform back = signal::istft(signal::stft(w));
    benchmark::DoNotOptimize(back.samples.data());
  }
}
BENCHMARK(BM_StftRoundTrip);

void BM_MixAtSnr(benchmark::State& state) {
  signal::Waveform clean = noise_second(3);
  signal::Waveform noise = noise_second(4);
  uint64_t seed = 0;
  for (auto _ : state) {
    signal::Waveform s = corpus::mix_at_snr(clean, noise, -5.0, seed++);
    benchmark::DoNotOptimize(s.samples.data());
  }
}
BENCHMARK(BM_MixAtSnr);

}  // namespace
