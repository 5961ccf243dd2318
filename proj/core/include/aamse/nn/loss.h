// core/include/aamse/nn/loss.h

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AAMSE_NN_LOSS_H_
#define AAMSE_NN_LOSS_H_

#include <string>

#include "aamse/nn/tensor.h"

namespace aamse::nn {

enum class LossKind { kL1, kL2 };

const char* loss_name(LossKind k);
LossKind loss_from_name(const std::string& name);

// Mean absolute error (L1) or mean squared error (L2) over all elements.
// When grad is non-null it receives d(loss)/d(pred); the L1 subgradient is
// 0 at exact ties.
double loss(LossKind kind, const Tensor& pred, const Tensor& target,
            Tensor* grad);

}  // namespace aamse::nn

#endif  // AAMSE_NN_LOSS_H_
