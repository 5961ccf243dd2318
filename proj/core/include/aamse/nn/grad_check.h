// core/include/aamse/nn/grad_check.h

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AAMSE_NN_GRAD_CHECK_H_
#define AAMSE_NN_GRAD_CHECK_H_

#include <cstdint>
#include <string>

#include "aamse/nn/layers.h"

namespace aamse::nn {

struct GradCheckReport {
  double max_rel_err = 0.0;
  std::string worst;  // "param <name>[i]" or "input[i]"
};

// Central-difference verification of a layer's backward pass over every
// parameter and every input element. The scalar objective is a fixed
// random linear functional of the output, seeded for reproducibility.
// Relative error uses max(|analytic|, |numeric|, 0.01) as the scale so
// near-zero gradients compare absolutely.
GradCheckReport grad_check(Layer& layer, const Tensor& input, double h,
                           uint64_t seed);

}  // namespace aamse::nn

#endif  // AAMSE_NN_GRAD_CHECK_H_
