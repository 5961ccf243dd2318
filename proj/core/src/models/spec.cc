// core/src/models/spec.cc

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "aamse/models/spec.h"

#include <fstream>
#include <sstream>

#include "aamse/corpus/emma.h"

namespace aamse::models {

const char* backbone_name(Backbone b) {
  switch (b) {
    case Backbone::kFcn: return "fcn";
    case Backbone::kTdnn: return "tdnn";
    case Backbone::kBlstm: return "blstm";
  }
  return "?";
}

Backbone backbone_from_name(const std::string& name) {
  if (name == "fcn") return Backbone::kFcn;
  if (name == "tdnn") return Backbone::kTdnn;
  if (name == "blstm") return Backbone::kBlstm;
  throw SpecError("unknown backbone '" + name + "' (fcn|tdnn|blstm)");
}

const char* fusion_name(FusionStrategy f) {
  switch (f) {
    case FusionStrategy::kAudioOnly: return "audio_only";
    case FusionStrategy::kDirectConcat: return "direct";
    case FusionStrategy::kUnilateralEncoding: return "unilateral";
    case FusionStrategy::kBilateralEncoding: return "bilateral";
  }
  return "?";
}

FusionStrategy fusion_from_name(const std::string& name) {
  if (name == "audio_only") return FusionStrategy::kAudioOnly;
  if (name == "direct") return FusionStrategy::kDirectConcat;
  if (name == "unilateral") return FusionStrategy::kUnilateralEncoding;
  if (name == "bilateral") return FusionStrategy::kBilateralEncoding;
  throw SpecError("unknown fusion '" + name +
                  "' (audio_only|direct|unilateral|bilateral)");
}

std::vector<std::string> ModelSpec::effective_sensors() const {
  return sensors.empty() ? corpus::sensor_canon() : sensors;
}

namespace {

nn::LayerSpec conv(int f, int k) {
  nn::LayerSpec s;
  s.kind = nn::LayerKind::kConv1d;
  s.filters = f;
  s.kernel = k;
  return s;
}

nn::LayerSpec dense(int out, std::vector<int> offsets = {}) {
  nn::LayerSpec s;
  s.kind = nn::LayerKind::kDense;
  s.out_dim = out;
  s.offsets = std::move(offsets);
  return s;
}

nn::LayerSpec tdnn(int out) {
  nn::LayerSpec s;
  s.kind = nn::LayerKind::kTdnn;
  s.out_dim = out;
  return s;
}

nn::LayerSpec blstm(int out) {
  nn::LayerSpec s;
  s.kind = nn::LayerKind::kBlstm;
  s.out_dim = out;
  return s;
}

std::vector<nn::LayerSpec> repeat(const nn::LayerSpec& s, int n) {
  return std::vector<nn::LayerSpec>(size_t(n), s);
}

void append(std::vector<nn::LayerSpec>& dst,
            const std::vector<nn::LayerSpec>& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

}  // namespace

ModelSpec default_spec(Backbone backbone, FusionStrategy fusion) {
  ModelSpec spec;
  spec.backbone = backbone;
  spec.fusion = fusion;
  const bool unilateral = fusion == FusionStrategy::kUnilateralEncoding;
  const bool bilateral = fusion == FusionStrategy::kBilateralEncoding;

  switch (backbone) {
    case Backbone::kFcn: {
      if (unilateral) {
        spec.emma_encoder = {conv(128, 256), conv(128, 128), conv(1, 55)};
        spec.se_network = repeat(conv(128, 55), 4);
        spec.se_network.push_back(conv(1, 55));
      } else if (bilateral) {
        spec.audio_encoder = {conv(128, 55), conv(128, 55), conv(18, 55)};
        spec.emma_encoder = {conv(128, 128), conv(128, 128), conv(18, 64)};
        spec.se_network = repeat(conv(128, 55), 4);
        spec.se_network.push_back(conv(1, 55));
      } else {
        spec.se_network = repeat(conv(128, 55), 7);
        spec.se_network.push_back(conv(1, 55));
      }
      break;
    }
    case Backbone::kTdnn: {
      // The 771-wide bottleneck consumes a 3-frame splice (771 = 3 x 257).
      const nn::LayerSpec bottleneck = dense(771, {-1, 0, 1});
      if (unilateral) {
        spec.emma_encoder = repeat(tdnn(18), 2);
        spec.se_network = repeat(tdnn(257), 2);
        spec.se_network.push_back(bottleneck);
        spec.se_network.push_back(dense(257));
        append(spec.se_network, repeat(tdnn(257), 4));
      } else if (bilateral) {
        spec.audio_encoder = {tdnn(257)};
        spec.emma_encoder = repeat(tdnn(18), 2);
        spec.se_network = repeat(tdnn(257), 2);
        spec.se_network.push_back(bottleneck);
        spec.se_network.push_back(dense(257));
        append(spec.se_network, repeat(tdnn(257), 3));
      } else {
        spec.se_network = repeat(tdnn(257), 3);
        spec.se_network.push_back(bottleneck);
        spec.se_network.push_back(dense(257));
        append(spec.se_network, repeat(tdnn(257), 4));
      }
      break;
    }
    case Backbone::kBlstm: {
      if (unilateral) {
        spec.emma_encoder = repeat(blstm(36), 3);
        append(spec.emma_encoder, repeat(dense(36), 2));
        spec.se_network = repeat(blstm(514), 2);
        spec.se_network.push_back(blstm(257));
        spec.se_network.push_back(dense(257));
      } else if (bilateral) {
        spec.audio_encoder = {blstm(257), dense(257)};
        spec.emma_encoder = repeat(blstm(18), 4);
        spec.emma_encoder.push_back(dense(18));
        spec.se_network = repeat(blstm(514), 2);
        spec.se_network.push_back(blstm(257));
        spec.se_network.push_back(dense(257));
      } else {
        spec.se_network = repeat(blstm(500), 3);
        spec.se_network.push_back(dense(257));
      }
      break;
    }
  }
  return spec;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

int parse_int(const std::string& s, const char* what) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw SpecError(std::string("expected integer for ") + what + ", got '" +
                    s + "'");
  }
}

nn::LayerSpec parse_layer_token(const std::string& token) {
  std::string head = token;
  std::vector<int> offsets;
  if (auto at = token.find('@'); at != std::string::npos) {
    head = token.substr(0, at);
    for (const auto& o : split(token.substr(at + 1), ','))
      offsets.push_back(parse_int(o, "context offset"));
  }
  auto parts = split(head, ':');
  if (parts.size() < 2) throw SpecError("bad layer token '" + token + "'");
  const std::string& kind = parts[0];
  nn::LayerSpec s;
  if (kind == "conv1d") {
    if (parts.size() != 3 || !offsets.empty())
      throw SpecError("conv1d token must be conv1d:<filters>:<kernel>, got '" +
                      token + "'");
    s.kind = nn::LayerKind::kConv1d;
    s.filters = parse_int(parts[1], "conv1d filters");
    s.kernel = parse_int(parts[2], "conv1d kernel");
  } else if (kind == "dense" || kind == "tdnn" || kind == "blstm") {
    if (parts.size() != 2)
      throw SpecError("bad layer token '" + token + "'");
    s.kind = kind == "dense" ? nn::LayerKind::kDense
             : kind == "tdnn" ? nn::LayerKind::kTdnn
                              : nn::LayerKind::kBlstm;
    s.out_dim = parse_int(parts[1], "layer output size");
    s.offsets = offsets;
    if (s.kind == nn::LayerKind::kBlstm && !offsets.empty())
      throw SpecError("blstm does not take context offsets: '" + token + "'");
  } else {
    throw SpecError("unknown layer kind '" + kind + "'");
  }
  return s;
}

}  // namespace

std::vector<nn::LayerSpec> parse_stack(const std::string& text) {
  std::vector<nn::LayerSpec> out;
  if (text.empty()) return out;
  for (const auto& token : split(text, ','))
    if (!token.empty()) {
      // Context offsets contain commas; re-join tokens that start with a
      // sign or digit onto the previous layer's offset list.
      if (!out.empty() && (token[0] == '-' || (token[0] >= '0' && token[0] <= '9'))) {
        out.back().offsets.push_back(parse_int(token, "context offset"));
        continue;
      }
      out.push_back(parse_layer_token(token));
    }
  return out;
}

std::string serialize_stack(const std::vector<nn::LayerSpec>& stack) {
  std::string out;
  for (const auto& s : stack) {
    if (!out.empty()) out += ",";
    switch (s.kind) {
      case nn::LayerKind::kConv1d:
        out += "conv1d:" + std::to_string(s.filters) + ":" +
               std::to_string(s.kernel);
        break;
      case nn::LayerKind::kDense:
        out += "dense:" + std::to_string(s.out_dim);
        break;
      case nn::LayerKind::kTdnn:
        out += "tdnn:" + std::to_string(s.out_dim);
        break;
      case nn::LayerKind::kBlstm:
        out += "blstm:" + std::to_string(s.out_dim);
        break;
    }
    if (!s.offsets.empty() && s.kind != nn::LayerKind::kBlstm) {
      out += "@";
      for (size_t i = 0; i < s.offsets.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s.offsets[i]);
      }
    }
  }
  return out;
}

ModelSpec parse_model_spec(const std::string& text) {
  bool have_backbone = false, have_fusion = false;
  bool have_audio = false, have_emma = false, have_se = false;
  ModelSpec spec;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw SpecError("model spec: expected key=value, got '" + line + "'");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "backbone") {
      spec.backbone = backbone_from_name(value);
      have_backbone = true;
    } else if (key == "fusion") {
      spec.fusion = fusion_from_name(value);
      have_fusion = true;
    } else if (key == "sensors") {
      spec.sensors.clear();
      for (const auto& s : split(value, ','))
        if (!s.empty()) spec.sensors.push_back(s);
      for (const auto& s : spec.sensors) corpus::sensor_index(s);
    } else if (key == "audio_encoder") {
      spec.audio_encoder = parse_stack(value);
      have_audio = true;
    } else if (key == "emma_encoder") {
      spec.emma_encoder = parse_stack(value);
      have_emma = true;
    } else if (key == "se_network") {
      spec.se_network = parse_stack(value);
      have_se = true;
    } else {
      throw SpecError("model spec: unknown key '" + key + "'");
    }
  }
  if (!have_backbone) throw SpecError("model spec: missing 'backbone'");
  if (!have_fusion) throw SpecError("model spec: missing 'fusion'");

  // Unset stacks fall back to the stock architecture for the pair.
  const ModelSpec stock = default_spec(spec.backbone, spec.fusion);
  if (!have_audio) spec.audio_encoder = stock.audio_encoder;
  if (!have_emma) spec.emma_encoder = stock.emma_encoder;
  if (!have_se) spec.se_network = stock.se_network;
  return spec;
}

ModelSpec load_model_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model spec: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_model_spec(text);
}

std::string serialize_model_spec(const ModelSpec& spec) {
  std::string out;
  out += "backbone=" + std::string(backbone_name(spec.backbone)) + "\n";
  out += "fusion=" + std::string(fusion_name(spec.fusion)) + "\n";
  out += "sensors=";
  const auto sensors = spec.effective_sensors();
  for (size_t i = 0; i < sensors.size(); ++i) {
    if (i) out += ",";
    out += sensors[i];
  }
  out += "\n";
  out += "audio_encoder=" + serialize_stack(spec.audio_encoder) + "\n";
  out += "emma_encoder=" + serialize_stack(spec.emma_encoder) + "\n";
  out += "se_network=" + serialize_stack(spec.se_network) + "\n";
  return out;
}

}  // namespace aamse::models
