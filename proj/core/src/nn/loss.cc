// core/src/nn/loss.cc

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "aamse/nn/loss.h"

#include <cmath>

namespace aamse::nn {

const char* loss_name(LossKind k) { return k == LossKind::kL1 ? "l1" : "l2"; }

LossKind loss_from_name(const std::string& name) {
  if (name == "l1") return LossKind::kL1;
  if (name == "l2") return LossKind::kL2;
  throw SpecError("unknown loss '" + name + "' (l1|l2)");
}

double loss(LossKind kind, const Tensor& pred, const Tensor& target,
            Tensor* grad) {
  if (!pred.same_shape(target))
    throw ShapeError("loss: prediction " + pred.shape_str() + " vs target " +
                     target.shape_str());
  const size_t n = pred.size();
  if (n == 0) throw ShapeError("loss: empty tensors");
  const double inv_n = 1.0 / double(n);

  if (grad != nullptr) *grad = Tensor(pred.rows, pred.cols);
  double acc = 0.0;
  if (kind == LossKind::kL2) {
    for (size_t i = 0; i < n; ++i) {
      const double d = pred.v[i] - target.v[i];
      acc += d * d;
      if (grad) grad->v[i] = 2.0 * d * inv_n;
    }
  } else {
    for (size_t i = 0; i < n; ++i) {
      const double d = pred.v[i] - target.v[i];
      acc += std::fabs(d);
      if (grad) grad->v[i] = d > 0.0 ? inv_n : (d < 0.0 ? -inv_n : 0.0);
    }
  }
  return acc * inv_n;
}

}  // namespace aamse::nn
