// core/include/aamse/nn/tensor.h

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AAMSE_NN_TENSOR_H_
#define AAMSE_NN_TENSOR_H_

#include <cstddef>
#include <string>
#include <vector>

#include "aamse/common.h"

namespace aamse::nn {

// 2-D tensor, rows = channels/features, cols = time steps/frames.
// Row-major so each channel is contiguous.
struct Tensor {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> v;

  Tensor() = default;
  Tensor(size_t r, size_t c, double fill = 0.0) : rows(r), cols(c), v(r * c, fill) {}

  size_t size() const { return v.size(); }
  double& at(size_t r, size_t c) { return v[r * cols + c]; }
  double at(size_t r, size_t c) const { return v[r * cols + c]; }
  double* row(size_t r) { return v.data() + r * cols; }
  const double* row(size_t r) const { return v.data() + r * cols; }

  bool same_shape(const Tensor& o) const {
    return rows == o.rows && cols == o.cols;
  }
  std::string shape_str() const {
    return std::to_string(rows) + "x" + std::to_string(cols);
  }
};

// A named view over one parameter array and its gradient accumulator.
struct ParamBlock {
  std::string name;
  double* value = nullptr;
  double* grad = nullptr;
  size_t count = 0;
};

}  // namespace aamse::nn

#endif  // AAMSE_NN_TENSOR_H_
