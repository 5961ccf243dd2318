// core/include/aamse/models/train.h

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AAMSE_MODELS_TRAIN_H_
#define AAMSE_MODELS_TRAIN_H_

#include <cstdint>
#include <string>
#include <vector>

#include "aamse/corpus/manifest.h"
#include "aamse/models/model.h"
#include "aamse/nn/loss.h"

namespace aamse::models {

// Loss kind and learning rate default per backbone when left unset:
// waveform models use L2 at 1e-3, spectral models L1 at 1e-4.
struct TrainConfig {
  std::string loss;        // "", "l1" or "l2"
  double lr = 0.0;         // 0 = backbone default
  int epochs = 20;
  uint64_t seed = 0;
  int patience = 0;        // early stop after this many stale epochs; 0 = off
  double clip_norm = 5.0;  // global L2 gradient clip
};

struct TrainResult {
  // epoch_loss[0] is the pre-update loss of the freshly built model; entry
  // e >= 1 is the mean per-utterance loss during epoch e.
  std::vector<double> epoch_loss;
  nn::LossKind loss = nn::LossKind::kL2;
  double lr = 0.0;
  int epochs_run = 0;
};

nn::LossKind resolve_loss(const ModelSpec& spec, const std::string& requested);
double resolve_lr(const ModelSpec& spec, double requested);

// One Adam update per training utterance (batch = one full sequence),
// utterance order reshuffled each epoch from cfg.seed. Computes the EMMA
// z-score statistics from the training split before the first update and
// stores them on the model. Deterministic given the seed.
TrainResult train(Model& model, const corpus::Manifest& manifest,
                  const std::string& manifest_path, const TrainConfig& cfg);

}  // namespace aamse::models

#endif  // AAMSE_MODELS_TRAIN_H_
