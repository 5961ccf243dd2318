// core/include/aamse/metrics/evaluate.h

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AAMSE_METRICS_EVALUATE_H_
#define AAMSE_METRICS_EVALUATE_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aamse/corpus/manifest.h"
#include "aamse/models/model.h"

namespace aamse::metrics {

struct EvalCell {
  size_t count = 0;
  double stoi_sum = 0.0;
  double si_sdr_sum = 0.0;
  double pesq_sum = 0.0;
  size_t pesq_count = 0;
  double ccr_sum = 0.0;
  size_t ccr_count = 0;

  double mean_stoi() const { return count ? stoi_sum / double(count) : 0.0; }
  double mean_si_sdr() const { return count ? si_sdr_sum / double(count) : 0.0; }
  std::optional<double> mean_pesq() const {
    if (!pesq_count) return std::nullopt;
    return pesq_sum / double(pesq_count);
  }
  std::optional<double> mean_ccr() const {
    if (!ccr_count) return std::nullopt;
    return ccr_sum / double(ccr_count);
  }
  void add(const EvalCell& o);
};

struct ModelEval {
  std::string name;
  // (snr_db, noise_id) cells in sorted order, then per-SNR and overall
  // aggregates derived from them.
  std::vector<std::tuple<double, std::string, EvalCell>> cells;
  std::vector<std::pair<double, EvalCell>> by_snr;
  EvalCell overall;
};

struct EvalReport {
  std::string version;
  std::string config_hash;
  std::string baseline;  // deltas reference; "noisy" by default
  std::vector<ModelEval> models;  // "noisy" pseudo-model first
  std::vector<std::string> row_errors;
};

struct EvalInputs {
  std::vector<std::pair<std::string, models::Model*>> models;
  std::string baseline;  // empty -> "noisy"
  int workers = 1;
  std::string config_hash;
  // PESQ adapter: external executable invoked as `exe ref.wav deg.wav`,
  // one decimal on stdout. Empty exe omits the PESQ column entirely.
  std::string pesq_exe;
  std::string scratch_dir;  // required when pesq_exe is set
  // Caller-supplied transcripts; CCR appears for models with hypotheses.
  std::map<std::string, std::string> ref_transcripts;  // utterance -> text
  std::map<std::string, std::map<std::string, std::string>> hyp_transcripts;
};

// Enhances every test row with every model, scores against the clean
// reference, and aggregates per SNR and overall. Rows that fail for a
// model are recorded in row_errors and excluded from that model's cells.
// Workers > 1 fan rows out over clones; merging is by row order, so the
// report is identical for any worker count.
EvalReport evaluate(const EvalInputs& in, const corpus::Manifest& manifest,
                    const std::string& manifest_path);

// Tab-separated table: per-SNR rows (noise_id "*") plus one aggregate row
// (snr "*") per model, with deltas against the baseline.
void write_report_tsv(const std::string& path, const EvalReport& r);
// Full machine-readable document including per-(snr, noise) cells.
void write_report_json(const std::string& path, const EvalReport& r);
// Per-model (snr, metric) series for external plotting.
void write_series_files(const std::string& dir, const EvalReport& r);

}  // namespace aamse::metrics

#endif  // AAMSE_METRICS_EVALUATE_H_
