// core/include/aamse/models/spec.h

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AAMSE_MODELS_SPEC_H_
#define AAMSE_MODELS_SPEC_H_

#include <string>
#include <vector>

#include "aamse/nn/layers.h"

namespace aamse::models {

enum class Backbone { kFcn, kTdnn, kBlstm };
enum class FusionStrategy {
  kAudioOnly,
  kDirectConcat,
  kUnilateralEncoding,
  kBilateralEncoding
};

const char* backbone_name(Backbone b);
Backbone backbone_from_name(const std::string& name);
const char* fusion_name(FusionStrategy f);
FusionStrategy fusion_from_name(const std::string& name);

// One enhancement architecture: a backbone family, a fusion strategy, the
// sensor subset feeding the articulatory branch, and the three layer
// stacks (audio encoder, articulatory encoder, enhancement network).
struct ModelSpec {
  Backbone backbone = Backbone::kBlstm;
  FusionStrategy fusion = FusionStrategy::kAudioOnly;
  std::vector<std::string> sensors;               // empty = full set
  std::vector<nn::LayerSpec> audio_encoder;       // empty unless bilateral
  std::vector<nn::LayerSpec> emma_encoder;        // empty for audio_only/direct
  std::vector<nn::LayerSpec> se_network;

  std::vector<std::string> effective_sensors() const;
  size_t emma_channels() const { return 2 * effective_sensors().size(); }
};

// Stock stacks for each (backbone, fusion) pair.
ModelSpec default_spec(Backbone backbone, FusionStrategy fusion);

// Text key-value format:
//   backbone=blstm
//   fusion=unilateral
//   sensors=UL,LL,LJ,T1
//   emma_encoder=blstm:36,blstm:36,blstm:36,dense:36,dense:36
//   se_network=blstm:514,blstm:514,blstm:257,dense:257
// Layer tokens: conv1d:<filters>:<kernel>, dense:<out>, tdnn:<out>,
// blstm:<out>; dense/tdnn accept @o1,o2,... context offsets. Stacks left
// unset fall back to the stock stacks for the chosen pair; unknown keys
// are rejected.
ModelSpec parse_model_spec(const std::string& text);
ModelSpec load_model_spec(const std::string& path);
std::string serialize_model_spec(const ModelSpec& spec);

std::string serialize_stack(const std::vector<nn::LayerSpec>& stack);
std::vector<nn::LayerSpec> parse_stack(const std::string& text);

}  // namespace aamse::models

#endif  // AAMSE_MODELS_SPEC_H_
