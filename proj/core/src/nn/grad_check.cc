// core/src/nn/grad_check.cc

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "aamse/nn/grad_check.h"

#include <cmath>

namespace aamse::nn {

namespace {

double objective(Layer& layer, const Tensor& input,
                 const std::vector<double>& coeffs) {
  Tensor y = layer.forward(input);
  double acc = 0.0;
  for (size_t i = 0; i < y.size(); ++i) acc += coeffs[i] * y.v[i];
  return acc;
}

void note(GradCheckReport& rep, double analytic, double numeric,
          const std::string& where) {
  const double scale =
      std::max({std::fabs(analytic), std::fabs(numeric), 0.01});
  const double rel = std::fabs(analytic - numeric) / scale;
  if (rel > rep.max_rel_err) {
    rep.max_rel_err = rel;
    rep.worst = where;
  }
}

}  // namespace

GradCheckReport grad_check(Layer& layer, const Tensor& input, double h,
                           uint64_t seed) {
  // Fixed scalarization L = sum(c .* y); coefficients away from zero so no
  // output is silently unconstrained.
  Tensor probe = layer.forward(input);
  std::vector<double> coeffs(probe.size());
  Rng rng(seed);
  for (double& c : coeffs) {
    c = rng.range(0.5, 1.5);
    if (rng.unit() < 0.5) c = -c;
  }

  layer.zero_grad();
  layer.forward(input);
  Tensor gy(probe.rows, probe.cols);
  for (size_t i = 0; i < gy.size(); ++i) gy.v[i] = coeffs[i];
  Tensor gx = layer.backward(gy);

  std::vector<ParamBlock> blocks;
  layer.collect_params(blocks);

  GradCheckReport rep;
  for (const auto& blk : blocks) {
    for (size_t j = 0; j < blk.count; ++j) {
      const double saved = blk.value[j];
      blk.value[j] = saved + h;
      const double up = objective(layer, input, coeffs);
      blk.value[j] = saved - h;
      const double down = objective(layer, input, coeffs);
      blk.value[j] = saved;
      note(rep, blk.grad[j], (up - down) / (2.0 * h),
           "param " + blk.name + "[" + std::to_string(j) + "]");
    }
  }

  Tensor x = input;
  for (size_t j = 0; j < x.size(); ++j) {
    const double saved = x.v[j];
    x.v[j] = saved + h;
    const double up = objective(layer, x, coeffs);
    x.v[j] = saved - h;
    const double down = objective(layer, x, coeffs);
    x.v[j] = saved;
    note(rep, gx.v[j], (up - down) / (2.0 * h),
         "input[" + std::to_string(j) + "]");
  }
  return rep;
}

}  // namespace aamse::nn
