// tests/test_nn.cc

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <doctest.h>

#include <cmath>

#include "aamse/nn/adam.h"
#include "aamse/nn/grad_check.h"
#include "aamse/nn/layers.h"
#include "aamse/nn/loss.h"

using namespace aamse;
using namespace aamse::nn;

namespace {

Tensor random_tensor(size_t rows, size_t cols, uint64_t seed) {
  Rng rng(seed);
  Tensor t(rows, cols);
  for (double& v : t.v) v = rng.range(-1.0, 1.0);
  return t;
}

void set_params(Layer& layer, const std::vector<double>& flat) {
  std::vector<ParamBlock> blocks;
  layer.collect_params(blocks);
  size_t off = 0;
  for (auto& blk : blocks) {
    for (size_t i = 0; i < blk.count; ++i) blk.value[i] = flat[off + i];
    off += blk.count;
  }
  REQUIRE(off == flat.size());
}

std::vector<double> get_params(Layer& layer) {
  std::vector<ParamBlock> blocks;
  layer.collect_params(blocks);
  std::vector<double> flat;
  for (auto& blk : blocks)
    flat.insert(flat.end(), blk.value, blk.value + blk.count);
  return flat;
}

}  // namespace

TEST_CASE("conv1d with a centered unit impulse is the identity") {
  Rng rng(1);
  Conv1d conv(1, 1, 5, Act::kLinear, rng);
  set_params(conv, {0, 0, 1, 0, 0, /*bias*/ 0});
  Tensor x = random_tensor(1, 37, 2);
  Tensor y = conv.forward(x);
  for (size_t i = 0; i < x.size(); ++i)
    CHECK(y.v[i] == doctest::Approx(x.v[i]).epsilon(1e-15));
}

TEST_CASE("conv1d matches the sliding-window oracle") {
  Rng rng(1);
  Conv1d conv(1, 1, 3, Act::kLinear, rng);
  set_params(conv, {1, 0, -1, /*bias*/ 0});
  Tensor x(1, 3);
  x.v = {1, 2, 3};
  Tensor y = conv.forward(x);
  CHECK(y.v[0] == doctest::Approx(-2.0));
  CHECK(y.v[1] == doctest::Approx(-2.0));
  CHECK(y.v[2] == doctest::Approx(2.0));
}

TEST_CASE("conv1d rejects mismatched channel counts") {
  Rng rng(1);
  Conv1d conv(3, 2, 5, Act::kLeakyRelu, rng);
  CHECK_THROWS_AS(conv.forward(random_tensor(2, 10, 3)), ShapeError);
}

TEST_CASE("conv1d gradients match central finite differences") {
  for (uint64_t seed = 0; seed < 3; ++seed) {
    Rng rng(seed + 10);
    Conv1d conv(2, 4, 55, Act::kLeakyRelu, rng);
    auto rep = grad_check(conv, random_tensor(2, 16, seed), 1e-5, seed);
    INFO("worst: ", rep.worst);
    CHECK(rep.max_rel_err < 1e-4);
  }
  // even kernel width takes the asymmetric padding path
  Rng rng(99);
  Conv1d even(2, 3, 4, Act::kLeakyRelu, rng);
  auto rep = grad_check(even, random_tensor(2, 12, 5), 1e-5, 5);
  CHECK(rep.max_rel_err < 1e-4);
}

TEST_CASE("dense identity and hand-computed affine map") {
  Rng rng(2);
  Dense id(3, 3, Act::kLinear, rng);
  set_params(id, {1, 0, 0, 0, 1, 0, 0, 0, 1, /*bias*/ 0, 0, 0});
  Tensor x = random_tensor(3, 7, 4);
  Tensor y = id.forward(x);
  for (size_t i = 0; i < x.size(); ++i) CHECK(y.v[i] == x.v[i]);

  Dense m(2, 2, Act::kLinear, rng);
  set_params(m, {1, 2, 3, 4, /*bias*/ 0, 0});
  Tensor v(2, 1);
  v.v = {1, 1};
  Tensor out = m.forward(v);
  CHECK(out.v[0] == doctest::Approx(3.0));
  CHECK(out.v[1] == doctest::Approx(7.0));
}

TEST_CASE("dense gradients match central finite differences") {
  for (uint64_t seed = 0; seed < 3; ++seed) {
    Rng rng(seed + 20);
    Dense dense(8, 5, Act::kLeakyRelu, rng);
    auto rep = grad_check(dense, random_tensor(8, 1, seed), 1e-5, seed);
    INFO("worst: ", rep.worst);
    CHECK(rep.max_rel_err < 1e-4);
  }
}

TEST_CASE("tdnn with offsets {0} equals the framewise dense layer") {
  Rng rng1(7), rng2(7);
  Tdnn tdnn(4, 3, {0}, Act::kLeakyRelu, rng1);
  Dense dense(4, 3, Act::kLeakyRelu, rng2);
  set_params(dense, get_params(tdnn));
  Tensor x = random_tensor(4, 9, 8);
  Tensor a = tdnn.forward(x);
  Tensor b = dense.forward(x);
  REQUIRE(a.same_shape(b));
  for (size_t i = 0; i < a.size(); ++i)
    CHECK(a.v[i] == doctest::Approx(b.v[i]).epsilon(1e-12));
}

TEST_CASE("tdnn splice matches the brute-force oracle with edge clamping") {
  Rng rng(3);
  Tdnn tdnn(2, 3, {-1, 0, 1}, Act::kLinear, rng);
  Tensor x = random_tensor(2, 5, 9);
  Tensor y = tdnn.forward(x);
  REQUIRE(y.rows == 3);
  REQUIRE(y.cols == 5);

  std::vector<double> params = get_params(tdnn);
  const size_t S = 6;  // 2 channels x 3 offsets
  for (size_t t = 0; t < 5; ++t) {
    // splice in offset order (-1, 0, +1), channels within each offset
    std::vector<double> spliced;
    for (int off : {-1, 0, 1}) {
      long long src = std::clamp<long long>(long(t) + off, 0, 4);
      spliced.push_back(x.at(0, size_t(src)));
      spliced.push_back(x.at(1, size_t(src)));
    }
    for (size_t o = 0; o < 3; ++o) {
      double want = params[3 * S + o];  // bias after the 3xS weight matrix
      for (size_t s = 0; s < S; ++s) want += params[o * S + s] * spliced[s];
      CHECK(y.at(o, t) == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("tdnn validates its context offsets") {
  Rng rng(4);
  CHECK_THROWS_AS(Tdnn(2, 2, {}, Act::kLinear, rng), InvalidInput);
  CHECK_THROWS_AS(Tdnn(2, 2, {1, -1, 0}, Act::kLinear, rng), InvalidInput);
  CHECK_THROWS_AS(Tdnn(2, 2, {-1, 1}, Act::kLinear, rng), InvalidInput);
}

TEST_CASE("tdnn gradients match central finite differences") {
  for (uint64_t seed = 0; seed < 3; ++seed) {
    Rng rng(seed + 30);
    Tdnn tdnn(3, 4, {-2, -1, 0, 1, 2}, Act::kLeakyRelu, rng);
    auto rep = grad_check(tdnn, random_tensor(3, 5, seed), 1e-5, seed);
    INFO("worst: ", rep.worst);
    CHECK(rep.max_rel_err < 1e-4);
  }
}

TEST_CASE("blstm with all-zero parameters emits zeros") {
  Rng rng(5);
  Blstm blstm(3, 6, rng);
  set_params(blstm, std::vector<double>(get_params(blstm).size(), 0.0));
  Tensor y = blstm.forward(random_tensor(3, 7, 11));
  for (double v : y.v) CHECK(v == 0.0);
}

TEST_CASE("blstm directions agree on single-frame input with shared weights") {
  Rng rng(6);
  Blstm blstm(3, 8, rng);
  // copy forward-direction parameters onto the backward direction
  std::vector<ParamBlock> blocks;
  blstm.collect_params(blocks);
  REQUIRE(blocks.size() == 6);  // wx, wh, b per direction
  for (int i = 0; i < 3; ++i) {
    REQUIRE(blocks[size_t(i)].count == blocks[size_t(i + 3)].count);
    for (size_t j = 0; j < blocks[size_t(i)].count; ++j)
      blocks[size_t(i + 3)].value[j] = blocks[size_t(i)].value[j];
  }
  Tensor y = blstm.forward(random_tensor(3, 1, 12));
  REQUIRE(y.rows == 8);
  for (size_t u = 0; u < 4; ++u)
    CHECK(y.at(u, 0) == doctest::Approx(y.at(u + 4, 0)).epsilon(1e-15));
}

TEST_CASE("blstm odd output width splits directions as ceil/floor") {
  Rng rng(61);
  Blstm odd(4, 5, rng);
  Tensor y = odd.forward(random_tensor(4, 3, 13));
  CHECK(y.rows == 5);
  auto rep = grad_check(odd, random_tensor(4, 3, 14), 1e-5, 14);
  CHECK(rep.max_rel_err < 1e-4);
}

TEST_CASE("blstm BPTT gradients match central finite differences") {
  for (uint64_t seed = 0; seed < 3; ++seed) {
    Rng rng(seed + 40);
    Blstm blstm(2, 4, rng);
    auto rep = grad_check(blstm, random_tensor(2, 4, seed), 1e-5, seed);
    INFO("worst: ", rep.worst);
    CHECK(rep.max_rel_err < 1e-4);
  }
  Rng rng(50);
  Blstm wide(3, 8, rng);
  auto rep = grad_check(wide, random_tensor(3, 6, 15), 1e-5, 15);
  CHECK(rep.max_rel_err < 1e-4);
}

TEST_CASE("loss values and gradients from hand computation") {
  Tensor p1(1, 1), t1(1, 1);
  p1.v = {2.0};
  t1.v = {0.0};
  Tensor g;
  CHECK(loss(LossKind::kL2, p1, t1, &g) == doctest::Approx(4.0));
  CHECK(g.v[0] == doctest::Approx(4.0));

  Tensor p2(1, 2), t2(1, 2);
  p2.v = {1.0, -1.0};
  t2.v = {0.0, 0.0};
  CHECK(loss(LossKind::kL1, p2, t2, &g) == doctest::Approx(1.0));
  CHECK(g.v[0] == doctest::Approx(0.5));
  CHECK(g.v[1] == doctest::Approx(-0.5));

  // ties: L1 subgradient 0
  CHECK(loss(LossKind::kL1, t2, t2, &g) == 0.0);
  CHECK(g.v[0] == 0.0);

  Tensor self = random_tensor(3, 4, 1);
  CHECK(loss(LossKind::kL2, self, self, nullptr) == 0.0);
  CHECK(loss(LossKind::kL1, self, self, nullptr) == 0.0);

  Tensor wrong(2, 2);
  CHECK_THROWS_AS(loss(LossKind::kL2, p1, wrong, nullptr), ShapeError);
}

TEST_CASE("adam reproduces two hand-computed steps to 1e-12") {
  double theta = 0.0;
  std::vector<double> grad = {1.0};
  std::vector<ParamBlock> blocks{{"theta", &theta, grad.data(), 1}};
  AdamConfig cfg;  // lr 0.001, beta1 0.9, beta2 0.999, eps 1e-8
  Adam adam(cfg);

  // Hand oracle, same update formulas evaluated independently.
  double m = 0.0, v = 0.0, want = 0.0;
  for (int t = 1; t <= 2; ++t) {
    m = 0.9 * m + 0.1 * 1.0;
    v = 0.999 * v + 0.001 * 1.0;
    const double m_hat = m / (1.0 - std::pow(0.9, t));
    const double v_hat = v / (1.0 - std::pow(0.999, t));
    want -= 0.001 * m_hat / (std::sqrt(v_hat) + 1e-8);

    adam.step(blocks);
    CHECK(std::fabs(theta - want) < 1e-12);
  }
  // after one step theta ~ -lr within the epsilon perturbation
  CHECK(want == doctest::Approx(-0.002 / (1.0 + 1e-8)).epsilon(1e-9));
}

TEST_CASE("adam with zero gradient leaves parameters untouched") {
  std::vector<double> theta = {0.5, -1.5};
  std::vector<double> grad = {0.0, 0.0};
  std::vector<ParamBlock> blocks{{"p", theta.data(), grad.data(), 2}};
  Adam adam(AdamConfig{});
  for (int i = 0; i < 3; ++i) adam.step(blocks);
  CHECK(theta[0] == 0.5);
  CHECK(theta[1] == -1.5);
}

TEST_CASE("adam rejects non-finite gradients") {
  std::vector<double> theta = {0.0};
  std::vector<double> grad = {std::nan("")};
  std::vector<ParamBlock> blocks{{"p", theta.data(), grad.data(), 1}};
  Adam adam(AdamConfig{});
  CHECK_THROWS_AS(adam.step(blocks), NumericalError);
}

TEST_CASE("global norm clip rescales only when above the bound") {
  std::vector<double> p = {0.0, 0.0};
  std::vector<double> g = {3.0, 4.0};  // norm 5
  std::vector<ParamBlock> blocks{{"p", p.data(), g.data(), 2}};
  CHECK(clip_global_norm(blocks, 10.0) == doctest::Approx(5.0));
  CHECK(g[0] == 3.0);
  CHECK(clip_global_norm(blocks, 2.5) == doctest::Approx(5.0));
  CHECK(g[0] == doctest::Approx(1.5));
  CHECK(g[1] == doctest::Approx(2.0));
}

TEST_CASE("forward passes are deterministic") {
  Rng rng1(70), rng2(70);
  Blstm a(3, 6, rng1), b(3, 6, rng2);
  Tensor x = random_tensor(3, 9, 71);
  CHECK(a.forward(x).v == b.forward(x).v);
}
