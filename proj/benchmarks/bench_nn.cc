// benchmarks/bench_nn.cc

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <benchmark/benchmark.h>

#include "aamse/nn/layers.h"

using namespace aamse;

namespace {

nn::Tensor random_tensor(size_t rows, size_t cols, uint64_t seed) {
  Rng rng(seed);
  nn::Tensor t(rows, cols);
  for (auto& v : t.v) v = rng.range(-1.0, 1.0);
  return t;
}

// One second of waveform through a mid-stack convolution.
void BM_Conv1dForward(benchmark::State& state) {
  Rng rng(1);
  nn::Conv1d conv(int(state.range(0)), int(state.range(0)), 55,
                  nn::Act::kLeakyRelu, rng);
  nn::Tensor x = random_tensor(size_t(state.range(0)), 16000, 2);
  for (auto _ : state) {
    nn::Tensor y = conv.forward(x);
    benchmark::DoNotOptimize(y.v.data());
  }
  state.SetItemsProcessed(state.iterations() * 16000 * 55 * state.range(0) *
                          state.range(0));
}
BENCHMARK(BM_Conv1dForward)->Arg(16)->Arg(64)->Arg(128);

void BM_Conv1dBackward(benchmark::State& state) {
  Rng rng(1);
  nn::Conv1d conv(64, 64, 55, nn::Act::kLeakyRelu, rng);
  nn::Tensor x = random_tensor(64, 16000, 2);
  nn::Tensor y = conv.forward(x);
  for (auto _ : state) {
    nn::Tensor gx = conv.backward(y);
    benchmark::DoNotOptimize(gx.v.data());
  }
}
BENCHMARK(BM_Conv1dBackward);

// One second of frames (126) through a recurrent layer.
void BM_BlstmForward(benchmark::State& state) {
  Rng rng(3);
  nn::Blstm blstm(257, int(state.range(0)), rng);
  nn::Tensor x = random_tensor(257, 126, 4);
  for (auto _ : state) {
    nn::Tensor y = blstm.forward(x);
    benchmark::DoNotOptimize(y.v.data());
  }
}
BENCHMARK(BM_BlstmForward)->Arg(64)->Arg(500);

void BM_TdnnForward(benchmark::State& state) {
  Rng rng(5);
  nn::Tdnn tdnn(257, 257, {-2, -1, 0, 1, 2}, nn::Act::kLeakyRelu, rng);
  nn::Tensor x = random_tensor(257, 126, 6);
  for (auto _ : state) {
    nn::Tensor y = tdnn.forward(x);
    benchmark::DoNotOptimize(y.v.data());
  }
}
BENCHMARK(BM_TdnnForward);

}  // namespace
