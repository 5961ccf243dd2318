// core/src/nn/layers.cc

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "aamse/nn/layers.h"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace aamse::nn {

const char* act_name(Act a) {
  return a == Act::kLinear ? "linear" : "lrelu";
}

Act act_from_name(const std::string& name) {
  if (name == "linear") return Act::kLinear;
  if (name == "lrelu") return Act::kLeakyRelu;
  throw SpecError("unknown activation '" + name + "' (linear|lrelu)");
}

namespace {

double act_apply(Act a, double z) {
  if (a == Act::kLinear) return z;
  return z >= 0.0 ? z : kLeakySlope * z;
}

double act_deriv(Act a, double z) {
  if (a == Act::kLinear) return 1.0;
  return z >= 0.0 ? 1.0 : kLeakySlope;
}

void init_uniform(std::vector<double>& w, int fan_in, Rng& rng) {
  double bound = std::sqrt(1.0 / double(fan_in));
  for (double& x : w) x = rng.range(-bound, bound);
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

void Layer::zero_grad() {
  std::vector<ParamBlock> blocks;
  collect_params(blocks);
  for (auto& blk : blocks) std::fill(blk.grad, blk.grad + blk.count, 0.0);
}

size_t Layer::param_count() {
  std::vector<ParamBlock> blocks;
  collect_params(blocks);
  size_t n = 0;
  for (auto& blk : blocks) n += blk.count;
  return n;
}

// ---------------------------------------------------------------------------
// Conv1d

Conv1d::Conv1d(int in_ch, int out_ch, int kernel, Act act, Rng& rng)
    : in_ch_(in_ch), out_ch_(out_ch), kernel_(kernel),
      pad_left_((kernel - 1) / 2), act_(act) {
  if (in_ch < 1 || out_ch < 1 || kernel < 1)
    throw SpecError("conv1d: channels and kernel must be >= 1");
  w_.resize(size_t(out_ch) * size_t(in_ch) * size_t(kernel));
  b_.assign(size_t(out_ch), 0.0);
  gw_.assign(w_.size(), 0.0);
  gb_.assign(b_.size(), 0.0);
  init_uniform(w_, in_ch * kernel, rng);
}

std::string Conv1d::describe() const {
  return "conv1d(f:" + std::to_string(out_ch_) + ",k:" +
         std::to_string(kernel_) + "," + act_name(act_) + ")";
}

Tensor Conv1d::forward(const Tensor& x) {
  if (x.rows != size_t(in_ch_))
    throw ShapeError("conv1d: expected " + std::to_string(in_ch_) +
                     " input channels, got " + std::to_string(x.rows));
  const size_t T = x.cols;
  x_cache_ = x;
  pre_cache_ = Tensor(size_t(out_ch_), T);

  // Tiled over time so an input-row segment stays in L1 across all taps.
  constexpr size_t kTile = 2048;
  for (int o = 0; o < out_ch_; ++o) {
    double* y = pre_cache_.row(size_t(o));
    for (size_t t = 0; t < T; ++t) y[t] = b_[size_t(o)];
    for (size_t t0 = 0; t0 < T; t0 += kTile) {
      const size_t t1 = std::min(T, t0 + kTile);
      for (int i = 0; i < in_ch_; ++i) {
        const double* xr = x.row(size_t(i));
        const double* wr =
            &w_[(size_t(o) * size_t(in_ch_) + size_t(i)) * size_t(kernel_)];
        for (int j = 0; j < kernel_; ++j) {
          const double wj = wr[j];
          const long long off = j - pad_left_;
          // y[t] += wj * x[t + off] over t in [t0, t1) with t+off in [0, T)
          const size_t s0 = off < 0 ? std::max(t0, size_t(-off)) : t0;
          const size_t s1 =
              off > 0 ? std::min(t1, T - std::min(T, size_t(off))) : t1;
          if (s0 >= s1) continue;
          const double* xs = xr + static_cast<long long>(s0) + off;
          double* yd = y + s0;
          const size_t len = s1 - s0;
          for (size_t u = 0; u < len; ++u) yd[u] += wj * xs[u];
        }
      }
    }
  }

  Tensor out = pre_cache_;
  if (act_ != Act::kLinear)
    for (double& z : out.v) z = act_apply(act_, z);
  return out;
}

Tensor Conv1d::backward(const Tensor& grad_out) {
  const size_t T = x_cache_.cols;
  if (grad_out.rows != size_t(out_ch_) || grad_out.cols != T)
    throw ShapeError("conv1d backward: gradient shape " + grad_out.shape_str());

  Tensor gz = grad_out;
  if (act_ != Act::kLinear) {
    for (size_t idx = 0; idx < gz.v.size(); ++idx)
      gz.v[idx] *= act_deriv(act_, pre_cache_.v[idx]);
  }

  Tensor gx(size_t(in_ch_), T);
  for (int o = 0; o < out_ch_; ++o) {
    const double* gzr = gz.row(size_t(o));
    double acc = 0.0;
    for (size_t t = 0; t < T; ++t) acc += gzr[t];
    gb_[size_t(o)] += acc;

    for (int i = 0; i < in_ch_; ++i) {
      const double* xr = x_cache_.row(size_t(i));
      double* gxr = gx.row(size_t(i));
      const size_t wbase =
          (size_t(o) * size_t(in_ch_) + size_t(i)) * size_t(kernel_);
      for (int j = 0; j < kernel_; ++j) {
        const int off = j - pad_left_;
        const double wj = w_[wbase + size_t(j)];
        double wacc = 0.0;
        if (off <= 0) {
          const size_t shift = size_t(-off);
          if (shift >= T) continue;
          const double* gzd = gzr + shift;
          double* gxd = gxr;
          const size_t len = T - shift;
          for (size_t t = 0; t < len; ++t) {
            wacc += gzd[t] * xr[t];
            gxd[t] += wj * gzd[t];
          }
        } else {
          if (size_t(off) >= T) continue;
          const double* xs = xr + off;
          double* gxd = gxr + off;
          const size_t len = T - size_t(off);
          for (size_t t = 0; t < len; ++t) {
            wacc += gzr[t] * xs[t];
            gxd[t] += wj * gzr[t];
          }
        }
        gw_[wbase + size_t(j)] += wacc;
      }
    }
  }
  return gx;
}

void Conv1d::collect_params(std::vector<ParamBlock>& out) {
  out.push_back({describe() + ".w", w_.data(), gw_.data(), w_.size()});
  out.push_back({describe() + ".b", b_.data(), gb_.data(), b_.size()});
}

// ---------------------------------------------------------------------------
// Dense

Dense::Dense(int in_dim, int out_dim, Act act, Rng& rng)
    : in_dim_(in_dim), out_dim_(out_dim), act_(act) {
  if (in_dim < 1 || out_dim < 1)
    throw SpecError("dense: dimensions must be >= 1");
  w_.resize(size_t(out_dim) * size_t(in_dim));
  b_.assign(size_t(out_dim), 0.0);
  gw_.assign(w_.size(), 0.0);
  gb_.assign(b_.size(), 0.0);
  init_uniform(w_, in_dim, rng);
}

std::string Dense::describe() const {
  return "dense(" + std::to_string(out_dim_) + "," + act_name(act_) + ")";
}

Tensor Dense::forward(const Tensor& x) {
  if (x.rows != size_t(in_dim_))
    throw ShapeError("dense: expected " + std::to_string(in_dim_) +
                     " input features, got " + std::to_string(x.rows));
  const size_t T = x.cols;
  x_cache_ = x;
  pre_cache_ = Tensor(size_t(out_dim_), T);
  for (int o = 0; o < out_dim_; ++o) {
    double* y = pre_cache_.row(size_t(o));
    const double* wr = &w_[size_t(o) * size_t(in_dim_)];
    for (size_t t = 0; t < T; ++t) y[t] = b_[size_t(o)];
    for (int i = 0; i < in_dim_; ++i) {
      const double wi = wr[i];
      const double* xr = x.row(size_t(i));
      for (size_t t = 0; t < T; ++t) y[t] += wi * xr[t];
    }
  }
  Tensor out = pre_cache_;
  if (act_ != Act::kLinear)
    for (double& z : out.v) z = act_apply(act_, z);
  return out;
}

Tensor Dense::backward(const Tensor& grad_out) {
  const size_t T = x_cache_.cols;
  if (grad_out.rows != size_t(out_dim_) || grad_out.cols != T)
    throw ShapeError("dense backward: gradient shape " + grad_out.shape_str());

  Tensor gz = grad_out;
  if (act_ != Act::kLinear) {
    for (size_t idx = 0; idx < gz.v.size(); ++idx)
      gz.v[idx] *= act_deriv(act_, pre_cache_.v[idx]);
  }

  Tensor gx(size_t(in_dim_), T);
  for (int o = 0; o < out_dim_; ++o) {
    const double* gzr = gz.row(size_t(o));
    double acc = 0.0;
    for (size_t t = 0; t < T; ++t) acc += gzr[t];
    gb_[size_t(o)] += acc;
    const double* wr = &w_[size_t(o) * size_t(in_dim_)];
    double* gwr = &gw_[size_t(o) * size_t(in_dim_)];
    for (int i = 0; i < in_dim_; ++i) {
      const double* xr = x_cache_.row(size_t(i));
      double* gxr = gx.row(size_t(i));
      double wacc = 0.0;
      const double wi = wr[i];
      for (size_t t = 0; t < T; ++t) {
        wacc += gzr[t] * xr[t];
        gxr[t] += wi * gzr[t];
      }
      gwr[i] += wacc;
    }
  }
  return gx;
}

void Dense::collect_params(std::vector<ParamBlock>& out) {
  out.push_back({describe() + ".w", w_.data(), gw_.data(), w_.size()});
  out.push_back({describe() + ".b", b_.data(), gb_.data(), b_.size()});
}

// ---------------------------------------------------------------------------
// Tdnn

Tdnn::Tdnn(int in_dim, int out_dim, std::vector<int> offsets, Act act, Rng& rng)
    : in_dim_(in_dim), out_dim_(out_dim), offsets_(std::move(offsets)),
      act_(act) {
  if (in_dim < 1 || out_dim < 1)
    throw SpecError("tdnn: dimensions must be >= 1");
  if (offsets_.empty()) throw InvalidInput("tdnn: empty context offsets");
  if (!std::is_sorted(offsets_.begin(), offsets_.end()))
    throw InvalidInput("tdnn: context offsets must be sorted");
  if (std::find(offsets_.begin(), offsets_.end(), 0) == offsets_.end())
    throw InvalidInput("tdnn: context offsets must include 0");
  const size_t spliced = size_t(in_dim_) * offsets_.size();
  w_.resize(size_t(out_dim_) * spliced);
  b_.assign(size_t(out_dim_), 0.0);
  gw_.assign(w_.size(), 0.0);
  gb_.assign(b_.size(), 0.0);
  init_uniform(w_, int(spliced), rng);
}

std::string Tdnn::describe() const {
  std::string s = "tdnn(" + std::to_string(out_dim_) + ",ctx:";
  for (size_t i = 0; i < offsets_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(offsets_[i]);
  }
  return s + "," + act_name(act_) + ")";
}

Tensor Tdnn::forward(const Tensor& x) {
  if (x.rows != size_t(in_dim_))
    throw ShapeError("tdnn: expected " + std::to_string(in_dim_) +
                     " input features, got " + std::to_string(x.rows));
  const size_t T = x.cols;
  t_cache_ = T;
  const size_t S = size_t(in_dim_) * offsets_.size();

  // Splice with edge clamping, then a shared affine map per frame.
  spliced_cache_ = Tensor(S, T);
  for (size_t oi = 0; oi < offsets_.size(); ++oi) {
    const long long off = offsets_[oi];
    for (int i = 0; i < in_dim_; ++i) {
      const double* xr = x.row(size_t(i));
      double* sr = spliced_cache_.row(oi * size_t(in_dim_) + size_t(i));
      for (size_t t = 0; t < T; ++t) {
        long long src = static_cast<long long>(t) + off;
        if (src < 0) src = 0;
        if (src >= static_cast<long long>(T)) src = static_cast<long long>(T) - 1;
        sr[t] = xr[size_t(src)];
      }
    }
  }

  pre_cache_ = Tensor(size_t(out_dim_), T);
  for (int o = 0; o < out_dim_; ++o) {
    double* y = pre_cache_.row(size_t(o));
    const double* wr = &w_[size_t(o) * S];
    for (size_t t = 0; t < T; ++t) y[t] = b_[size_t(o)];
    for (size_t s = 0; s < S; ++s) {
      const double ws = wr[s];
      const double* sr = spliced_cache_.row(s);
      for (size_t t = 0; t < T; ++t) y[t] += ws * sr[t];
    }
  }
  Tensor out = pre_cache_;
  if (act_ != Act::kLinear)
    for (double& z : out.v) z = act_apply(act_, z);
  return out;
}

Tensor Tdnn::backward(const Tensor& grad_out) {
  const size_t T = t_cache_;
  if (grad_out.rows != size_t(out_dim_) || grad_out.cols != T)
    throw ShapeError("tdnn backward: gradient shape " + grad_out.shape_str());
  const size_t S = size_t(in_dim_) * offsets_.size();

  Tensor gz = grad_out;
  if (act_ != Act::kLinear) {
    for (size_t idx = 0; idx < gz.v.size(); ++idx)
      gz.v[idx] *= act_deriv(act_, pre_cache_.v[idx]);
  }

  Tensor g_spliced(S, T);
  for (int o = 0; o < out_dim_; ++o) {
    const double* gzr = gz.row(size_t(o));
    double acc = 0.0;
    for (size_t t = 0; t < T; ++t) acc += gzr[t];
    gb_[size_t(o)] += acc;
    const double* wr = &w_[size_t(o) * S];
    double* gwr = &gw_[size_t(o) * S];
    for (size_t s = 0; s < S; ++s) {
      const double* sr = spliced_cache_.row(s);
      double* gsr = g_spliced.row(s);
      double wacc = 0.0;
      const double ws = wr[s];
      for (size_t t = 0; t < T; ++t) {
        wacc += gzr[t] * sr[t];
        gsr[t] += ws * gzr[t];
      }
      gwr[s] += wacc;
    }
  }

  // Scatter spliced gradients back through the clamped gather.
  Tensor gx(size_t(in_dim_), T);
  for (size_t oi = 0; oi < offsets_.size(); ++oi) {
    const long long off = offsets_[oi];
    for (int i = 0; i < in_dim_; ++i) {
      const double* gsr = g_spliced.row(oi * size_t(in_dim_) + size_t(i));
      double* gxr = gx.row(size_t(i));
      for (size_t t = 0; t < T; ++t) {
        long long src = static_cast<long long>(t) + off;
        if (src < 0) src = 0;
        if (src >= static_cast<long long>(T)) src = static_cast<long long>(T) - 1;
        gxr[size_t(src)] += gsr[t];
      }
    }
  }
  return gx;
}

void Tdnn::collect_params(std::vector<ParamBlock>& out) {
  out.push_back({describe() + ".w", w_.data(), gw_.data(), w_.size()});
  out.push_back({describe() + ".b", b_.data(), gb_.data(), b_.size()});
}

// ---------------------------------------------------------------------------
// Blstm

Blstm::Blstm(int in_dim, int out_dim, Rng& rng)
    : in_dim_(in_dim), out_dim_(out_dim) {
  if (in_dim < 1 || out_dim < 1)
    throw SpecError("blstm: dimensions must be >= 1");
  fwd_.hidden = (out_dim + 1) / 2;
  fwd_.reverse = false;
  bwd_.hidden = out_dim - fwd_.hidden;
  bwd_.reverse = true;
  if (bwd_.hidden < 1)
    throw SpecError("blstm: output width must be >= 2 for two directions");
  for (Direction* d : {&fwd_, &bwd_}) {
    const size_t h = size_t(d->hidden);
    d->wx.resize(4 * h * size_t(in_dim_));
    d->wh.resize(4 * h * h);
    d->b.assign(4 * h, 0.0);
    init_uniform(d->wx, in_dim_, rng);
    init_uniform(d->wh, d->hidden, rng);
    // forget-gate bias starts at +1
    for (size_t i = h; i < 2 * h; ++i) d->b[i] = 1.0;
    d->gwx.assign(d->wx.size(), 0.0);
    d->gwh.assign(d->wh.size(), 0.0);
    d->gb.assign(d->b.size(), 0.0);
  }
}

std::string Blstm::describe() const {
  return "blstm(" + std::to_string(out_dim_) + ")";
}

void Blstm::run_direction(Direction& d, const Tensor& x) {
  const size_t T = x.cols;
  const size_t h = size_t(d.hidden);
  const size_t D = size_t(in_dim_);
  d.gate_i = Tensor(h, T);
  d.gate_f = Tensor(h, T);
  d.gate_g = Tensor(h, T);
  d.gate_o = Tensor(h, T);
  d.cell = Tensor(h, T);
  d.tanh_c = Tensor(h, T);
  d.out = Tensor(h, T);

  std::vector<double> xt(D), h_prev(h, 0.0), c_prev(h, 0.0), z(4 * h);
  for (size_t step = 0; step < T; ++step) {
    const size_t t = d.reverse ? T - 1 - step : step;
    for (size_t i = 0; i < D; ++i) xt[i] = x.at(i, t);
    for (size_t r = 0; r < 4 * h; ++r) {
      double acc = d.b[r];
      const double* wxr = &d.wx[r * D];
      for (size_t i = 0; i < D; ++i) acc += wxr[i] * xt[i];
      const double* whr = &d.wh[r * h];
      for (size_t i = 0; i < h; ++i) acc += whr[i] * h_prev[i];
      z[r] = acc;
    }
    for (size_t u = 0; u < h; ++u) {
      const double gi = sigmoid(z[u]);
      const double gf = sigmoid(z[h + u]);
      const double gg = std::tanh(z[2 * h + u]);
      const double go = sigmoid(z[3 * h + u]);
      const double c = gf * c_prev[u] + gi * gg;
      const double tc = std::tanh(c);
      const double ho = go * tc;
      d.gate_i.at(u, t) = gi;
      d.gate_f.at(u, t) = gf;
      d.gate_g.at(u, t) = gg;
      d.gate_o.at(u, t) = go;
      d.cell.at(u, t) = c;
      d.tanh_c.at(u, t) = tc;
      d.out.at(u, t) = ho;
      c_prev[u] = c;
      h_prev[u] = ho;
    }
  }
}

Tensor Blstm::forward(const Tensor& x) {
  if (x.rows != size_t(in_dim_))
    throw ShapeError("blstm: expected " + std::to_string(in_dim_) +
                     " input features, got " + std::to_string(x.rows));
  x_cache_ = x;
  run_direction(fwd_, x);
  run_direction(bwd_, x);

  Tensor out(size_t(out_dim_), x.cols);
  for (int u = 0; u < fwd_.hidden; ++u)
    std::memcpy(out.row(size_t(u)), fwd_.out.row(size_t(u)),
                x.cols * sizeof(double));
  for (int u = 0; u < bwd_.hidden; ++u)
    std::memcpy(out.row(size_t(fwd_.hidden + u)), bwd_.out.row(size_t(u)),
                x.cols * sizeof(double));
  return out;
}

Tensor Blstm::backward_direction(Direction& d, const Tensor& grad_slice) {
  const size_t T = x_cache_.cols;
  const size_t h = size_t(d.hidden);
  const size_t D = size_t(in_dim_);

  Tensor gx(D, T);
  std::vector<double> dh_next(h, 0.0), dc_next(h, 0.0), dz(4 * h), xt(D),
      h_prev(h), prev_carry(h);

  // Iterate the direction's own time order in reverse.
  for (size_t step = T; step-- > 0;) {
    const size_t t = d.reverse ? T - 1 - step : step;
    const size_t t_prev =
        step == 0 ? size_t(-1) : (d.reverse ? T - step : step - 1);

    for (size_t i = 0; i < D; ++i) xt[i] = x_cache_.at(i, t);
    for (size_t u = 0; u < h; ++u)
      h_prev[u] = step == 0 ? 0.0 : d.out.at(u, t_prev);

    for (size_t u = 0; u < h; ++u) {
      const double gi = d.gate_i.at(u, t);
      const double gf = d.gate_f.at(u, t);
      const double gg = d.gate_g.at(u, t);
      const double go = d.gate_o.at(u, t);
      const double tc = d.tanh_c.at(u, t);
      const double c_prev = step == 0 ? 0.0 : d.cell.at(u, t_prev);

      const double dh = grad_slice.at(u, t) + dh_next[u];
      const double dc = dh * go * (1.0 - tc * tc) + dc_next[u];

      dz[u] = dc * gg * gi * (1.0 - gi);                  // input gate
      dz[h + u] = dc * c_prev * gf * (1.0 - gf);          // forget gate
      dz[2 * h + u] = dc * gi * (1.0 - gg * gg);          // candidate
      dz[3 * h + u] = dh * tc * go * (1.0 - go);          // output gate
      prev_carry[u] = dc * gf;
    }

    std::fill(dh_next.begin(), dh_next.end(), 0.0);
    for (size_t r = 0; r < 4 * h; ++r) {
      const double dzr = dz[r];
      if (dzr == 0.0) continue;
      d.gb[r] += dzr;
      double* gwxr = &d.gwx[r * D];
      for (size_t i = 0; i < D; ++i) gwxr[i] += dzr * xt[i];
      double* gwhr = &d.gwh[r * h];
      for (size_t i = 0; i < h; ++i) gwhr[i] += dzr * h_prev[i];
      const double* wxr = &d.wx[r * D];
      for (size_t i = 0; i < D; ++i) gx.at(i, t) += wxr[i] * dzr;
      const double* whr = &d.wh[r * h];
      for (size_t i = 0; i < h; ++i) dh_next[i] += whr[i] * dzr;
    }
    dc_next = prev_carry;
  }
  return gx;
}

Tensor Blstm::backward(const Tensor& grad_out) {
  const size_t T = x_cache_.cols;
  if (grad_out.rows != size_t(out_dim_) || grad_out.cols != T)
    throw ShapeError("blstm backward: gradient shape " + grad_out.shape_str());

  Tensor g_fwd(size_t(fwd_.hidden), T), g_bwd(size_t(bwd_.hidden), T);
  for (int u = 0; u < fwd_.hidden; ++u)
    std::memcpy(g_fwd.row(size_t(u)), grad_out.row(size_t(u)),
                T * sizeof(double));
  for (int u = 0; u < bwd_.hidden; ++u)
    std::memcpy(g_bwd.row(size_t(u)), grad_out.row(size_t(fwd_.hidden + u)),
                T * sizeof(double));

  Tensor gx = backward_direction(fwd_, g_fwd);
  Tensor gx2 = backward_direction(bwd_, g_bwd);
  for (size_t i = 0; i < gx.v.size(); ++i) gx.v[i] += gx2.v[i];
  return gx;
}

void Blstm::collect_params(std::vector<ParamBlock>& out) {
  const char* names[2] = {"fwd", "bwd"};
  Direction* dirs[2] = {&fwd_, &bwd_};
  for (int k = 0; k < 2; ++k) {
    Direction& d = *dirs[k];
    std::string prefix = describe() + "." + names[k];
    out.push_back({prefix + ".wx", d.wx.data(), d.gwx.data(), d.wx.size()});
    out.push_back({prefix + ".wh", d.wh.data(), d.gwh.data(), d.wh.size()});
    out.push_back({prefix + ".b", d.b.data(), d.gb.data(), d.b.size()});
  }
}

// ---------------------------------------------------------------------------

std::unique_ptr<Layer> make_layer(const LayerSpec& spec, int in_dim,
                                  Act fallback_act, Rng& rng) {
  Act act = spec.activation == "default" ? fallback_act
                                         : act_from_name(spec.activation);
  switch (spec.kind) {
    case LayerKind::kConv1d:
      return std::make_unique<Conv1d>(in_dim, spec.filters, spec.kernel, act,
                                      rng);
    case LayerKind::kDense:
      if (spec.offsets.empty() ||
          (spec.offsets.size() == 1 && spec.offsets[0] == 0))
        return std::make_unique<Dense>(in_dim, spec.out_dim, act, rng);
      // Spliced dense is the same machinery as a TDNN layer.
      return std::make_unique<Tdnn>(in_dim, spec.out_dim, spec.offsets, act,
                                    rng);
    case LayerKind::kTdnn: {
      std::vector<int> offsets =
          spec.offsets.empty() ? std::vector<int>{-2, -1, 0, 1, 2}
                               : spec.offsets;
      return std::make_unique<Tdnn>(in_dim, spec.out_dim, offsets, act, rng);
    }
    case LayerKind::kBlstm:
      return std::make_unique<Blstm>(in_dim, spec.out_dim, rng);
  }
  throw SpecError("make_layer: unknown layer kind");
}

}  // namespace aamse::nn
