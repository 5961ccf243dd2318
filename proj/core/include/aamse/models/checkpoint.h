// core/include/aamse/models/checkpoint.h

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AAMSE_MODELS_CHECKPOINT_H_
#define AAMSE_MODELS_CHECKPOINT_H_

#include <map>
#include <string>

#include "aamse/models/model.h"

namespace aamse::models {

// Versioned container: a text metadata block (model spec, init seed,
// normalization statistics, caller key-values) terminated by a BINARY
// marker, then the parameter blocks as little-endian float64 in
// declaration order.
void save_checkpoint(const std::string& path, Model& model,
                     const std::map<std::string, std::string>& meta = {});

struct Checkpoint {
  Model model;
  std::map<std::string, std::string> meta;
};

Checkpoint load_checkpoint(const std::string& path);

}  // namespace aamse::models

#endif  // AAMSE_MODELS_CHECKPOINT_H_
