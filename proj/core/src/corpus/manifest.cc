// core/src/corpus/manifest.cc

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "aamse/corpus/manifest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "aamse/corpus/mix.h"

namespace aamse::corpus {

std::string format_db(double snr_db) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", snr_db);
  return buf;
}

namespace {

std::string noisy_name(const ManifestRow& row) {
  return "noisy/" + row.utterance_id + "__" + row.noise_id + "__snr" +
         format_db(row.snr_db) + ".wav";
}

uint64_t row_seed(const MixPlan& plan, const std::string& utt,
                  const std::string& noise_id, double snr_db) {
  return derive_seed(plan.seed,
                     utt + "|" + noise_id + "|" + format_db(snr_db));
}

}  // namespace

Manifest build_manifest(const std::vector<CorpusItem>& items,
                        const std::vector<NoiseClip>& noise_pool,
                        const MixPlan& plan) {
  if (items.empty()) throw InvalidInput("build_manifest: empty item list");
  if (plan.noises_per_utterance < 1)
    throw InvalidInput("build_manifest: noises_per_utterance must be >= 1");
  if (plan.train_snrs.empty() || plan.test_snrs.empty())
    throw InvalidInput("build_manifest: SNR lists must be non-empty");

  std::vector<size_t> train_noises, test_noises;
  for (size_t i = 0; i < noise_pool.size(); ++i)
    (noise_pool[i].test_split ? test_noises : train_noises).push_back(i);
  if (train_noises.size() < size_t(plan.noises_per_utterance))
    throw InvalidInput("build_manifest: train noise pool smaller than "
                       "noises_per_utterance");
  if (test_noises.empty())
    throw InvalidInput("build_manifest: no test noises in pool");

  size_t train_count = plan.train_count;
  if (train_count == 0) {
    size_t test_count = std::max<size_t>(1, items.size() / 7);
    train_count = items.size() > test_count ? items.size() - test_count : 0;
  }
  if (train_count > items.size())
    throw InvalidInput("build_manifest: train_count exceeds item count");

  Manifest m;
  m.metadata.push_back("# aamse manifest v1");
  m.metadata.push_back("# mixing=cartesian(noise_draws x snr_levels)");
  m.metadata.push_back("# plan_seed=" + std::to_string(plan.seed));
  m.metadata.push_back(
      "# fields=split,utterance_id,clean_path,noisy_path,track_path,"
      "noise_id,snr_db,seed");

  for (size_t u = 0; u < items.size(); ++u) {
    const CorpusItem& item = items[u];
    const bool is_train = u < train_count;
    const std::string clean_path = "clean/" + item.utterance_id + ".wav";
    const std::string track_path = "tracks/" + item.utterance_id + ".emma";

    if (is_train) {
      // Seeded draw without replacement from the train pool.
      std::vector<size_t> order = train_noises;
      Rng rng(derive_seed(plan.seed, "sel|" + item.utterance_id));
      rng.shuffle(order);
      order.resize(size_t(plan.noises_per_utterance));
      for (size_t ni : order) {
        for (double snr : plan.train_snrs) {
          ManifestRow row;
          row.split = "train";
          row.utterance_id = item.utterance_id;
          row.clean_path = clean_path;
          row.track_path = track_path;
          row.noise_id = noise_pool[ni].id;
          row.snr_db = snr;
          row.seed = row_seed(plan, item.utterance_id, row.noise_id, snr);
          row.noisy_path = noisy_name(row);
          m.rows.push_back(std::move(row));
        }
      }
    } else {
      for (size_t ni : test_noises) {
        for (double snr : plan.test_snrs) {
          ManifestRow row;
          row.split = "test";
          row.utterance_id = item.utterance_id;
          row.clean_path = clean_path;
          row.track_path = track_path;
          row.noise_id = noise_pool[ni].id;
          row.snr_db = snr;
          row.seed = row_seed(plan, item.utterance_id, row.noise_id, snr);
          row.noisy_path = noisy_name(row);
          m.rows.push_back(std::move(row));
        }
      }
    }
  }
  return m;
}

void write_manifest(const std::string& path, const Manifest& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create manifest: " + path);
  for (const auto& line : m.metadata) out << line << "\n";
  for (const auto& r : m.rows) {
    out << r.split << "\t" << r.utterance_id << "\t" << r.clean_path << "\t"
        << r.noisy_path << "\t" << r.track_path << "\t" << r.noise_id << "\t"
        << format_db(r.snr_db) << "\t" << r.seed << "\n";
  }
  if (!out) throw IoError("short write: " + path);
}

Manifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path);
  Manifest m;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      m.metadata.push_back(line);
      continue;
    }
    std::istringstream ss(line);
    ManifestRow r;
    std::string snr, seed;
    if (!std::getline(ss, r.split, '\t') ||
        !std::getline(ss, r.utterance_id, '\t') ||
        !std::getline(ss, r.clean_path, '\t') ||
        !std::getline(ss, r.noisy_path, '\t') ||
        !std::getline(ss, r.track_path, '\t') ||
        !std::getline(ss, r.noise_id, '\t') || !std::getline(ss, snr, '\t') ||
        !std::getline(ss, seed))
      throw IoError(path + ":" + std::to_string(lineno) +
                    ": expected 8 tab-separated fields");
    if (r.split != "train" && r.split != "test")
      throw IoError(path + ":" + std::to_string(lineno) + ": bad split '" +
                    r.split + "'");
    try {
      r.snr_db = std::stod(snr);
      r.seed = std::stoull(seed);
    } catch (const std::exception&) {
      throw IoError(path + ":" + std::to_string(lineno) +
                    ": unparsable snr_db/seed");
    }
    m.rows.push_back(std::move(r));
  }
  return m;
}

std::string resolve_path(const std::string& manifest_path,
                         const std::string& relative) {
  std::filesystem::path rel(relative);
  if (rel.is_absolute()) return relative;
  return (std::filesystem::path(manifest_path).parent_path() / rel).string();
}

void materialize_corpus(const std::string& dir, const SynthCorpus& corpus,
                        const Manifest& manifest) {
  namespace fs = std::filesystem;
  for (const char* sub : {"clean", "noisy", "tracks", "noise"})
    fs::create_directories(fs::path(dir) / sub);

  std::map<std::string, const CorpusItem*> by_utt;
  for (const auto& item : corpus.items) by_utt[item.utterance_id] = &item;
  std::map<std::string, const NoiseClip*> by_noise;
  for (const auto& clip : corpus.noises) by_noise[clip.id] = &clip;

  for (const auto& item : corpus.items) {
    signal::write_wav((fs::path(dir) / "clean" / (item.utterance_id + ".wav")).string(),
                      item.clean);
    write_track((fs::path(dir) / "tracks" / (item.utterance_id + ".emma")).string(),
                item.track);
  }
  for (const auto& clip : corpus.noises)
    signal::write_wav((fs::path(dir) / "noise" / (clip.id + ".wav")).string(),
                      clip.wave);

  for (const auto& row : manifest.rows) {
    auto utt = by_utt.find(row.utterance_id);
    if (utt == by_utt.end())
      throw InvalidInput("materialize_corpus: manifest row references unknown "
                         "utterance " + row.utterance_id);
    auto clip = by_noise.find(row.noise_id);
    if (clip == by_noise.end())
      throw InvalidInput("materialize_corpus: manifest row references unknown "
                         "noise " + row.noise_id);
    signal::Waveform noisy =
        mix_at_snr(utt->second->clean, clip->second->wave, row.snr_db, row.seed);
    signal::write_wav((fs::path(dir) / row.noisy_path).string(), noisy);
  }
}

}  // namespace aamse::corpus
