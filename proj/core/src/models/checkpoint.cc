// core/src/models/checkpoint.cc

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "aamse/models/checkpoint.h"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace aamse::models {

namespace {

constexpr const char* kMagic = "AAMSE-CKPT v1";

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void save_checkpoint(const std::string& path, Model& model,
                     const std::map<std::string, std::string>& meta) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create checkpoint: " + path);

  out << kMagic << "\n";
  out << serialize_model_spec(model.spec());
  out << "init_seed=" << model.init_seed() << "\n";
  for (const auto& [k, v] : meta) out << "meta." << k << "=" << v << "\n";
  for (const auto& [speaker, stats] : model.norm.by_speaker) {
    out << "norm=" << speaker << ":";
    for (size_t i = 0; i < stats.size(); ++i) {
      if (i) out << ",";
      out << fmt_double(stats[i].first) << "," << fmt_double(stats[i].second);
    }
    out << "\n";
  }

  std::vector<nn::ParamBlock> blocks;
  model.collect_params(blocks);
  for (const auto& blk : blocks)
    out << "block=" << blk.name << ":" << blk.count << "\n";
  out << "BINARY\n";
  for (const auto& blk : blocks) {
    // Host is little-endian; parameters are stored verbatim as float64.
    out.write(reinterpret_cast<const char*>(blk.value),
              std::streamsize(blk.count * sizeof(double)));
  }
  if (!out) throw IoError("short write: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kMagic)
    throw IoError(path + ": not an AAMSE v1 checkpoint");

  std::string spec_text;
  std::map<std::string, std::string> meta;
  std::map<std::string, std::vector<std::pair<double, double>>> norm;
  std::vector<std::pair<std::string, size_t>> blocks;
  uint64_t init_seed = 0;

  while (std::getline(in, line)) {
    if (line == "BINARY") break;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw IoError(path + ": malformed metadata line '" + line + "'");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "init_seed") {
      init_seed = std::stoull(value);
    } else if (key.rfind("meta.", 0) == 0) {
      meta[key.substr(5)] = value;
    } else if (key == "norm") {
      auto colon = value.find(':');
      if (colon == std::string::npos)
        throw IoError(path + ": malformed norm line");
      const std::string speaker = value.substr(0, colon);
      std::vector<std::pair<double, double>> stats;
      std::istringstream ss(value.substr(colon + 1));
      std::string tok;
      std::vector<double> nums;
      while (std::getline(ss, tok, ',')) nums.push_back(std::stod(tok));
      if (nums.size() % 2 != 0)
        throw IoError(path + ": norm stats must be mean,std pairs");
      for (size_t i = 0; i < nums.size(); i += 2)
        stats.emplace_back(nums[i], nums[i + 1]);
      norm[speaker] = std::move(stats);
    } else if (key == "block") {
      auto colon = value.rfind(':');
      if (colon == std::string::npos)
        throw IoError(path + ": malformed block line");
      blocks.emplace_back(value.substr(0, colon),
                          std::stoull(value.substr(colon + 1)));
    } else {
      spec_text += line;
      spec_text += "\n";
    }
  }
  if (in.eof()) throw IoError(path + ": missing BINARY section");

  ModelSpec spec = parse_model_spec(spec_text);
  Checkpoint ckpt{Model(spec, init_seed), {}};
  ckpt.meta = std::move(meta);
  ckpt.model.norm.by_speaker = std::move(norm);

  std::vector<nn::ParamBlock> live;
  ckpt.model.collect_params(live);
  if (live.size() != blocks.size())
    throw IoError(path + ": checkpoint has " + std::to_string(blocks.size()) +
                  " parameter blocks, model expects " +
                  std::to_string(live.size()));
  for (size_t i = 0; i < live.size(); ++i) {
    if (live[i].count != blocks[i].second)
      throw IoError(path + ": block '" + blocks[i].first +
                    "' size mismatch");
    in.read(reinterpret_cast<char*>(live[i].value),
            std::streamsize(live[i].count * sizeof(double)));
    if (!in)
      throw IoError(path + ": truncated parameter data in block '" +
                    blocks[i].first + "'");
  }
  return ckpt;
}

}  // namespace aamse::models
