// core/include/aamse/nn/adam.h

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AAMSE_NN_ADAM_H_
#define AAMSE_NN_ADAM_H_

#include <cstdint>
#include <vector>

#include "aamse/nn/tensor.h"

namespace aamse::nn {

struct AdamConfig {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Bias-corrected Adam over a fixed set of parameter blocks. Moments are
// sized on the first step; the block layout must not change afterwards.
class Adam {
 public:
  explicit Adam(const AdamConfig& cfg) : cfg_(cfg) {}

  // theta -= lr * m_hat / (sqrt(v_hat) + eps). Throws NumericalError on a
  // non-finite gradient.
  void step(const std::vector<ParamBlock>& blocks);

  int64_t step_count() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  int64_t t_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

// Scales all gradients so their joint L2 norm is at most max_norm.
// Returns the pre-clip norm.
double clip_global_norm(const std::vector<ParamBlock>& blocks,
                        double max_norm);

}  // namespace aamse::nn

#endif  // AAMSE_NN_ADAM_H_
