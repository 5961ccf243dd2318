// core/include/aamse/corpus/manifest.h

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AAMSE_CORPUS_MANIFEST_H_
#define AAMSE_CORPUS_MANIFEST_H_

#include <cstdint>
#include <string>
#include <vector>

#include "aamse/corpus/synth.h"

namespace aamse::corpus {

// Corpus mixing protocol. Training utterances get `noises_per_utterance`
// seeded draws (without replacement) from the train noise pool, crossed
// with every training SNR; test utterances get the full test-noise x
// test-SNR product. Train and test noise pools are disjoint by
// construction (NoiseClip::test_split).
struct MixPlan {
  std::vector<double> train_snrs = {-10, -7, -4, -1, 1, 4, 7, 10};
  std::vector<double> test_snrs = {-8, -5, -2, 0, 2, 5};
  int noises_per_utterance = 5;
  uint64_t seed = 0;
  // Leading items are the training split. 0 selects the default rule:
  // everything but max(1, n/7) trailing test utterances.
  size_t train_count = 0;
};

struct ManifestRow {
  std::string split;  // "train" | "test"
  std::string utterance_id;
  std::string clean_path;
  std::string noisy_path;
  std::string track_path;
  std::string noise_id;
  double snr_db = 0.0;
  uint64_t seed = 0;
};

struct Manifest {
  std::vector<std::string> metadata;  // '#'-prefixed header lines
  std::vector<ManifestRow> rows;
};

// Pure function of (items, noise_pool, plan). Paths are relative to the
// eventual corpus directory; no files are touched here.
Manifest build_manifest(const std::vector<CorpusItem>& items,
                        const std::vector<NoiseClip>& noise_pool,
                        const MixPlan& plan);

// Tab-separated, UTF-8, one record per line:
// split utterance_id clean_path noisy_path track_path noise_id snr_db seed
void write_manifest(const std::string& path, const Manifest& m);
Manifest read_manifest(const std::string& path);

// Writes clean/track/noise files plus one mixed noisy WAV per manifest row
// under `dir`, creating clean/, noisy/, tracks/ and noise/ subdirectories.
void materialize_corpus(const std::string& dir, const SynthCorpus& corpus,
                        const Manifest& manifest);

// Joins a manifest-relative path onto the directory containing the manifest.
std::string resolve_path(const std::string& manifest_path,
                         const std::string& relative);

// Shortest decimal form used for SNR fields and file names ("%.6g").
std::string format_db(double snr_db);

}  // namespace aamse::corpus

#endif  // AAMSE_CORPUS_MANIFEST_H_
