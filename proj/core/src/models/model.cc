// core/src/models/model.cc

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "aamse/models/model.h"

#include <cmath>
#include <cstring>

namespace aamse::models {

void NormStats::apply(Matrix& channels, const std::string& speaker) const {
  if (by_speaker.empty()) return;  // untrained model: leave channels raw
  auto it = by_speaker.find(speaker);
  if (it == by_speaker.end()) it = by_speaker.find("*");
  if (it == by_speaker.end())
    throw InvalidInput("norm stats: no pooled '*' entry");
  const auto& stats = it->second;
  if (stats.size() != channels.rows())
    throw ShapeError("norm stats: " + std::to_string(stats.size()) +
                     " channels recorded, track has " +
                     std::to_string(channels.rows()));
  for (size_t c = 0; c < channels.rows(); ++c) {
    const double mean = stats[c].first;
    const double inv = 1.0 / std::max(stats[c].second, 1e-8);
    double* row = channels.row(c);
    for (size_t i = 0; i < channels.cols(); ++i)
      row[i] = (row[i] - mean) * inv;
  }
}

std::string speaker_of(const std::string& utterance_id) {
  auto us = utterance_id.find('_');
  return us == std::string::npos ? utterance_id : utterance_id.substr(0, us);
}

nn::Tensor fuse(const nn::Tensor& s_repr, const nn::Tensor& e_repr,
                FusionStrategy strategy) {
  if (strategy == FusionStrategy::kAudioOnly) {
    if (e_repr.size() != 0)
      throw InvalidInput("fuse: audio_only takes no articulatory input");
    return s_repr;
  }
  if (s_repr.cols != e_repr.cols)
    throw ShapeError("fuse: time length mismatch, audio " +
                     s_repr.shape_str() + " vs emma " + e_repr.shape_str());
  nn::Tensor out(s_repr.rows + e_repr.rows, s_repr.cols);
  std::memcpy(out.v.data(), s_repr.v.data(), s_repr.size() * sizeof(double));
  std::memcpy(out.v.data() + s_repr.size(), e_repr.v.data(),
              e_repr.size() * sizeof(double));
  return out;
}

namespace {

// Builds one stack, threading the input width through and applying the
// default activation rule: hidden layers leaky, stack-final linear.
std::vector<std::unique_ptr<nn::Layer>> build_stack(
    const std::vector<nn::LayerSpec>& specs, int in_dim, const char* name,
    Rng& rng) {
  std::vector<std::unique_ptr<nn::Layer>> stack;
  int dim = in_dim;
  for (size_t i = 0; i < specs.size(); ++i) {
    const nn::Act fallback =
        i + 1 == specs.size() ? nn::Act::kLinear : nn::Act::kLeakyRelu;
    try {
      stack.push_back(nn::make_layer(specs[i], dim, fallback, rng));
    } catch (const Error& e) {
      throw SpecError(std::string(name) + "[" + std::to_string(i) +
                      "]: " + e.what());
    }
    dim = stack.back()->out_dim();
  }
  return stack;
}

nn::Tensor run_stack(std::vector<std::unique_ptr<nn::Layer>>& stack,
                     nn::Tensor x) {
  for (auto& layer : stack) x = layer->forward(x);
  return x;
}

nn::Tensor run_stack_backward(std::vector<std::unique_ptr<nn::Layer>>& stack,
                              nn::Tensor g) {
  for (size_t i = stack.size(); i-- > 0;) g = stack[i]->backward(g);
  return g;
}

}  // namespace

Model::Model(const ModelSpec& spec, uint64_t seed)
    : spec_(spec), seed_(seed) {
  for (const auto& s : spec_.effective_sensors()) corpus::sensor_index(s);

  const bool has_audio_enc = !spec_.audio_encoder.empty();
  const bool has_emma_enc = !spec_.emma_encoder.empty();
  switch (spec_.fusion) {
    case FusionStrategy::kAudioOnly:
    case FusionStrategy::kDirectConcat:
      if (has_audio_enc || has_emma_enc)
        throw SpecError(std::string(fusion_name(spec_.fusion)) +
                        " fusion takes no encoder stacks");
      break;
    case FusionStrategy::kUnilateralEncoding:
      if (has_audio_enc)
        throw SpecError("unilateral fusion takes no audio encoder");
      if (!has_emma_enc)
        throw SpecError("unilateral fusion requires an emma encoder");
      break;
    case FusionStrategy::kBilateralEncoding:
      if (!has_audio_enc || !has_emma_enc)
        throw SpecError("bilateral fusion requires both encoders");
      break;
  }

  const int audio_in = spec_.backbone == Backbone::kFcn ? 1 : kSpectralBins;
  const int emma_in = int(spec_.emma_channels());

  Rng rng(derive_seed(seed_, "model-init"));
  audio_enc_ = build_stack(spec_.audio_encoder, audio_in, "audio_encoder", rng);
  emma_enc_ = build_stack(spec_.emma_encoder, emma_in, "emma_encoder", rng);

  const int audio_repr =
      audio_enc_.empty() ? audio_in : audio_enc_.back()->out_dim();
  const int emma_repr = spec_.fusion == FusionStrategy::kAudioOnly
                            ? 0
                            : (emma_enc_.empty() ? emma_in
                                                 : emma_enc_.back()->out_dim());
  fused_audio_rows_ = size_t(audio_repr);
  fused_emma_rows_ = size_t(emma_repr);

  se_ = build_stack(spec_.se_network, audio_repr + emma_repr, "se_network", rng);
  if (se_.empty()) throw SpecError("se_network must not be empty");

  const int want_out = spec_.backbone == Backbone::kFcn ? 1 : kSpectralBins;
  const int got_out = se_.back()->out_dim();
  if (got_out != want_out)
    throw SpecError("se_network[" + std::to_string(se_.size() - 1) + "] " +
                    se_.back()->describe() + ": final output width " +
                    std::to_string(got_out) + ", expected " +
                    std::to_string(want_out));
}

nn::Tensor Model::forward(const nn::Tensor& audio, const nn::Tensor* emma) {
  const bool wants_emma = spec_.fusion != FusionStrategy::kAudioOnly;
  if (wants_emma && emma == nullptr)
    throw InvalidInput("model forward: fusion strategy requires a track");
  if (!wants_emma && emma != nullptr)
    throw InvalidInput("model forward: audio_only forbids a track");

  nn::Tensor s_repr = audio_enc_.empty()
                          ? audio
                          : run_stack(audio_enc_, audio);
  if (!wants_emma) return run_stack(se_, std::move(s_repr));

  nn::Tensor e_repr = emma_enc_.empty() ? *emma : run_stack(emma_enc_, *emma);
  nn::Tensor v = fuse(s_repr, e_repr, spec_.fusion);
  return run_stack(se_, std::move(v));
}

void Model::backward(const nn::Tensor& grad_pred) {
  nn::Tensor g = run_stack_backward(se_, grad_pred);
  if (spec_.fusion == FusionStrategy::kAudioOnly) {
    if (!audio_enc_.empty()) run_stack_backward(audio_enc_, std::move(g));
    return;
  }
  if (g.rows != fused_audio_rows_ + fused_emma_rows_)
    throw ShapeError("model backward: fused gradient shape mismatch");
  nn::Tensor gs(fused_audio_rows_, g.cols), ge(fused_emma_rows_, g.cols);
  std::memcpy(gs.v.data(), g.v.data(), gs.size() * sizeof(double));
  std::memcpy(ge.v.data(), g.v.data() + gs.size(), ge.size() * sizeof(double));
  if (!audio_enc_.empty()) run_stack_backward(audio_enc_, std::move(gs));
  if (!emma_enc_.empty()) run_stack_backward(emma_enc_, std::move(ge));
}

void Model::collect_params(std::vector<nn::ParamBlock>& out) {
  for (auto* stack : {&audio_enc_, &emma_enc_, &se_})
    for (auto& layer : *stack) layer->collect_params(out);
}

void Model::zero_grad() {
  std::vector<nn::ParamBlock> blocks;
  collect_params(blocks);
  for (auto& blk : blocks) std::fill(blk.grad, blk.grad + blk.count, 0.0);
}

size_t Model::param_count() {
  std::vector<nn::ParamBlock> blocks;
  collect_params(blocks);
  size_t n = 0;
  for (auto& blk : blocks) n += blk.count;
  return n;
}

Model Model::clone() const {
  Model copy(spec_, seed_);
  copy.norm = norm;
  std::vector<nn::ParamBlock> src, dst;
  const_cast<Model*>(this)->collect_params(src);
  copy.collect_params(dst);
  for (size_t i = 0; i < src.size(); ++i)
    std::memcpy(dst[i].value, src[i].value, src[i].count * sizeof(double));
  return copy;
}

namespace {

// Fits an aligned channel matrix to exactly `target` columns; the reported
// mismatch is bounded upstream by one EMMA period.
Matrix fit_columns(const Matrix& m, size_t target) {
  if (m.cols() == target) return m;
  Matrix out(m.rows(), target);
  for (size_t r = 0; r < m.rows(); ++r) {
    const double* src = m.row(r);
    double* dst = out.row(r);
    for (size_t c = 0; c < target; ++c)
      dst[c] = src[c < m.cols() ? c : m.cols() - 1];
  }
  return out;
}

nn::Tensor to_tensor(const Matrix& m) {
  nn::Tensor t(m.rows(), m.cols());
  t.v = m.data();
  return t;
}

}  // namespace

signal::Waveform enhance(Model& model, const signal::Waveform& noisy,
                         const corpus::ArticulatoryTrack* track,
                         const std::string& speaker) {
  signal::validate(noisy, "enhance");
  const ModelSpec& spec = model.spec();
  const bool wants_emma = spec.fusion != FusionStrategy::kAudioOnly;
  if (wants_emma && track == nullptr)
    throw InvalidInput("enhance: fusion strategy '" +
                       std::string(fusion_name(spec.fusion)) +
                       "' requires an articulatory track");
  if (!wants_emma && track != nullptr)
    throw InvalidInput("enhance: audio_only model takes no track");

  nn::Tensor emma;
  if (wants_emma) {
    corpus::ArticulatoryTrack selected =
        corpus::select_sensors(*track, spec.effective_sensors());
    model.norm.apply(selected.channels, speaker);
    if (spec.backbone == Backbone::kFcn) {
      Matrix aligned = corpus::align_to_waveform(selected);
      long long diff =
          static_cast<long long>(noisy.size()) - static_cast<long long>(aligned.cols());
      if (diff < -64 || diff > 64)
        throw AlignmentError("enhance: track duration differs from audio by " +
                             std::to_string(diff) + " samples");
      emma = to_tensor(fit_columns(aligned, noisy.size()));
    } else {
      emma = to_tensor(corpus::align_to_frames(selected, model.stft_params(),
                                               noisy.size()));
    }
  }

  if (spec.backbone == Backbone::kFcn) {
    nn::Tensor audio(1, noisy.size());
    audio.v = noisy.samples;
    nn::Tensor pred = model.forward(audio, wants_emma ? &emma : nullptr);
    signal::Waveform out;
    out.rate = noisy.rate;
    out.samples = std::move(pred.v);
    return out;
  }

  // Spectral path: predict the clean log1p magnitude, keep the noisy phase.
  signal::Spectrogram sp = signal::stft(noisy, model.stft_params());
  const size_t frames = sp.frames();
  nn::Tensor audio(size_t(kSpectralBins), frames);
  for (size_t m = 0; m < frames; ++m)
    for (size_t k = 0; k < size_t(kSpectralBins); ++k)
      audio.at(k, m) = sp.log_mag.at(m, k);

  nn::Tensor pred = model.forward(audio, wants_emma ? &emma : nullptr);
  signal::Spectrogram out_sp;
  out_sp.params = sp.params;
  out_sp.source_len = sp.source_len;
  out_sp.phase = sp.phase;
  out_sp.log_mag = Matrix(frames, size_t(kSpectralBins));
  for (size_t m = 0; m < frames; ++m)
    for (size_t k = 0; k < size_t(kSpectralBins); ++k)
      out_sp.log_mag.at(m, k) = std::max(0.0, pred.at(k, m));
  return signal::istft(out_sp);
}

signal::Waveform oracle_magnitude_enhance(const signal::Waveform& clean,
                                          const signal::Waveform& noisy,
                                          const signal::StftParams& p) {
  if (clean.size() != noisy.size())
    throw InvalidInput("oracle_magnitude_enhance: length mismatch");
  signal::Spectrogram sp_clean = signal::stft(clean, p);
  signal::Spectrogram sp_noisy = signal::stft(noisy, p);
  signal::Spectrogram mixed;
  mixed.params = p;
  mixed.source_len = sp_noisy.source_len;
  mixed.log_mag = sp_clean.log_mag;
  mixed.phase = sp_noisy.phase;
  return signal::istft(mixed);
}

}  // namespace aamse::models
