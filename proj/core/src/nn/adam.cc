// core/src/nn/adam.cc

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "aamse/nn/adam.h"

#include <cmath>

namespace aamse::nn {

void Adam::step(const std::vector<ParamBlock>& blocks) {
  if (m_.empty()) {
    m_.resize(blocks.size());
    v_.resize(blocks.size());
    for (size_t i = 0; i < blocks.size(); ++i) {
      m_[i].assign(blocks[i].count, 0.0);
      v_[i].assign(blocks[i].count, 0.0);
    }
  }
  if (m_.size() != blocks.size())
    throw ShapeError("adam: parameter block count changed between steps");

  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, double(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, double(t_));

  for (size_t i = 0; i < blocks.size(); ++i) {
    const ParamBlock& blk = blocks[i];
    if (m_[i].size() != blk.count)
      throw ShapeError("adam: block '" + blk.name + "' changed size");
    double* m = m_[i].data();
    double* v = v_[i].data();
    for (size_t j = 0; j < blk.count; ++j) {
      const double g = blk.grad[j];
      if (!std::isfinite(g))
        throw NumericalError("adam: non-finite gradient in block '" +
                             blk.name + "'");
      m[j] = cfg_.beta1 * m[j] + (1.0 - cfg_.beta1) * g;
      v[j] = cfg_.beta2 * v[j] + (1.0 - cfg_.beta2) * g * g;
      const double m_hat = m[j] / bc1;
      const double v_hat = v[j] / bc2;
      blk.value[j] -= cfg_.lr * m_hat / (std::sqrt(v_hat) + cfg_.eps);
    }
  }
}

double clip_global_norm(const std::vector<ParamBlock>& blocks,
                        double max_norm) {
  double sq = 0.0;
  for (const auto& blk : blocks)
    for (size_t j = 0; j < blk.count; ++j) sq += blk.grad[j] * blk.grad[j];
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0) {
    const double scale = max_norm / norm;
    for (const auto& blk : blocks)
      for (size_t j = 0; j < blk.count; ++j) blk.grad[j] *= scale;
  }
  return norm;
}

}  // namespace aamse::nn
