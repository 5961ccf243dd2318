// core/include/aamse/models/model.h

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AAMSE_MODELS_MODEL_H_
#define AAMSE_MODELS_MODEL_H_

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "aamse/corpus/emma.h"
#include "aamse/models/spec.h"
#include "aamse/nn/layers.h"
#include "aamse/signal/stft.h"

namespace aamse::models {

inline constexpr int kSpectralBins = 257;

// EMMA channel z-score statistics, keyed by speaker with "*" as the pooled
// fallback. Applied to the 250 Hz channels before alignment and encoders.
struct NormStats {
  std::map<std::string, std::vector<std::pair<double, double>>> by_speaker;

  bool empty() const { return by_speaker.empty(); }
  void apply(Matrix& channels, const std::string& speaker) const;
};

std::string speaker_of(const std::string& utterance_id);

// Channel-axis concatenation, audio block first. Representations must
// already be encoded per the strategy; a length mismatch is a ShapeError.
nn::Tensor fuse(const nn::Tensor& s_repr, const nn::Tensor& e_repr,
                FusionStrategy strategy);

// One instantiated architecture: parameterized stacks plus normalization
// state. Single-writer during training; use clone() to give each parallel
// reader its own instance (layer forward passes cache state internally).
class Model {
 public:
  Model(const ModelSpec& spec, uint64_t seed);

  const ModelSpec& spec() const { return spec_; }
  uint64_t init_seed() const { return seed_; }
  const signal::StftParams& stft_params() const { return stft_; }

  // audio: 1 x T (waveform models) or 257 x F (spectral models).
  // emma: aligned channels, required iff the strategy fuses them.
  nn::Tensor forward(const nn::Tensor& audio, const nn::Tensor* emma);
  // Backpropagates through all stacks, accumulating parameter gradients.
  void backward(const nn::Tensor& grad_pred);

  void collect_params(std::vector<nn::ParamBlock>& out);
  void zero_grad();
  size_t param_count();

  Model clone() const;

  NormStats norm;

 private:
  ModelSpec spec_;
  uint64_t seed_;
  signal::StftParams stft_;
  std::vector<std::unique_ptr<nn::Layer>> audio_enc_, emma_enc_, se_;
  size_t fused_audio_rows_ = 0, fused_emma_rows_ = 0;

  friend struct ModelAccess;
};

// Builds the stacks and runs the symbolic shape pass; inconsistent
// dimensions raise SpecError naming the offending layer.
inline Model build_model(const ModelSpec& spec, uint64_t seed = 0) {
  return Model(spec, seed);
}

// Full enhancement path. Waveform models map samples to samples; spectral
// models map log1p magnitudes and reuse the noisy phase through the
// inverse transform. Output length always equals the input length.
signal::Waveform enhance(Model& model, const signal::Waveform& noisy,
                         const corpus::ArticulatoryTrack* track,
                         const std::string& speaker = "");

// Upper-bound harness for the phase-borrowing path: clean magnitude with
// noisy phase through the inverse transform, no network involved.
signal::Waveform oracle_magnitude_enhance(const signal::Waveform& clean,
                                          const signal::Waveform& noisy,
                                          const signal::StftParams& p);

}  // namespace aamse::models

#endif  // AAMSE_MODELS_MODEL_H_
