// core/include/aamse/nn/layers.h

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AAMSE_NN_LAYERS_H_
#define AAMSE_NN_LAYERS_H_

#include <memory>
#include <string>
#include <vector>

#include "aamse/nn/tensor.h"

namespace aamse::nn {

enum class Act { kLinear, kLeakyRelu };

inline constexpr double kLeakySlope = 0.01;

const char* act_name(Act a);
Act act_from_name(const std::string& name);

enum class LayerKind { kConv1d, kDense, kTdnn, kBlstm };

// Structural description of one layer, before input width is known.
struct LayerSpec {
  LayerKind kind = LayerKind::kDense;
  int filters = 0;           // conv1d output channels
  int kernel = 0;            // conv1d kernel width
  int out_dim = 0;           // dense/tdnn/blstm output width
  std::vector<int> offsets;  // tdnn / spliced dense context, must include 0
  std::string activation = "default";
};

// Trainable layer over channel x time tensors. forward() caches what
// backward() needs; backward() accumulates parameter gradients and
// returns the input gradient.
class Layer {
 public:
  virtual ~Layer() = default;
  virtual Tensor forward(const Tensor& x) = 0;
  virtual Tensor backward(const Tensor& grad_out) = 0;
  virtual void collect_params(std::vector<ParamBlock>& out) = 0;
  virtual int in_dim() const = 0;
  virtual int out_dim() const = 0;
  virtual std::string describe() const = 0;

  void zero_grad();
  size_t param_count();
};

class Conv1d : public Layer {
 public:
  // Same-length zero-padded cross-correlation plus bias, then activation.
  // Even kernels extend one extra tap to the right of center.
  Conv1d(int in_ch, int out_ch, int kernel, Act act, Rng& rng);

  Tensor forward(const Tensor& x) override;
  Tensor backward(const Tensor& grad_out) override;
  void collect_params(std::vector<ParamBlock>& out) override;
  int in_dim() const override { return in_ch_; }
  int out_dim() const override { return out_ch_; }
  std::string describe() const override;

 private:
  int in_ch_, out_ch_, kernel_, pad_left_;
  Act act_;
  std::vector<double> w_, b_, gw_, gb_;  // w: [out][in][k]
  Tensor x_cache_, pre_cache_;
};

class Dense : public Layer {
 public:
  // Affine map applied per column (frame); a 1-column tensor is the plain
  // vector case.
  Dense(int in_dim, int out_dim, Act act, Rng& rng);

  Tensor forward(const Tensor& x) override;
  Tensor backward(const Tensor& grad_out) override;
  void collect_params(std::vector<ParamBlock>& out) override;
  int in_dim() const override { return in_dim_; }
  int out_dim() const override { return out_dim_; }
  std::string describe() const override;

 private:
  int in_dim_, out_dim_;
  Act act_;
  std::vector<double> w_, b_, gw_, gb_;  // w: [out][in]
  Tensor x_cache_, pre_cache_;
};

class Tdnn : public Layer {
 public:
  // Shared affine map over frames spliced at (t + offset) with edge
  // clamping. Offsets must be sorted and include 0.
  Tdnn(int in_dim, int out_dim, std::vector<int> offsets, Act act, Rng& rng);

  Tensor forward(const Tensor& x) override;
  Tensor backward(const Tensor& grad_out) override;
  void collect_params(std::vector<ParamBlock>& out) override;
  int in_dim() const override { return in_dim_; }
  int out_dim() const override { return out_dim_; }
  std::string describe() const override;

  const std::vector<int>& offsets() const { return offsets_; }

 private:
  int in_dim_, out_dim_;
  std::vector<int> offsets_;
  Act act_;
  std::vector<double> w_, b_, gw_, gb_;  // w: [out][spliced]
  Tensor spliced_cache_, pre_cache_;
  size_t t_cache_ = 0;
};

class Blstm : public Layer {
 public:
  // Standard LSTM recurrence run in both directions from zero state, with
  // the per-frame outputs concatenated (forward block first). Odd output
  // widths put the extra unit in the forward direction.
  Blstm(int in_dim, int out_dim, Rng& rng);

  Tensor forward(const Tensor& x) override;
  Tensor backward(const Tensor& grad_out) override;
  void collect_params(std::vector<ParamBlock>& out) override;
  int in_dim() const override { return in_dim_; }
  int out_dim() const override { return out_dim_; }
  std::string describe() const override;

 private:
  struct Direction {
    int hidden = 0;
    bool reverse = false;
    std::vector<double> wx, wh, b, gwx, gwh, gb;  // gates stacked i,f,g,o
    // forward caches, one row per hidden unit, one col per step
    Tensor gate_i, gate_f, gate_g, gate_o, cell, tanh_c, out;
  };

  void run_direction(Direction& d, const Tensor& x);
  Tensor backward_direction(Direction& d, const Tensor& grad_slice);

  int in_dim_, out_dim_;
  Direction fwd_, bwd_;
  Tensor x_cache_;
};

// Instantiates a layer for a known input width. `fallback_act` applies
// when spec.activation is "default" (conv/dense/tdnn only; blstm has no
// output activation).
std::unique_ptr<Layer> make_layer(const LayerSpec& spec, int in_dim,
                                  Act fallback_act, Rng& rng);

}  // namespace aamse::nn

#endif  // AAMSE_NN_LAYERS_H_
