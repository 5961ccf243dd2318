// core/src/metrics/evaluate.cc

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "aamse/metrics/evaluate.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "aamse/metrics/edit.h"
#include "aamse/metrics/sdr.h"
#include "aamse/metrics/stoi.h"

namespace aamse::metrics {

void EvalCell::add(const EvalCell& o) {
  count += o.count;
  stoi_sum += o.stoi_sum;
  si_sdr_sum += o.si_sdr_sum;
  pesq_sum += o.pesq_sum;
  pesq_count += o.pesq_count;
  ccr_sum += o.ccr_sum;
  ccr_count += o.ccr_count;
}

namespace {

struct RowScore {
  bool ok = false;
  std::string error;
  double stoi_v = 0.0;
  double si_sdr_v = 0.0;
  std::optional<double> pesq_v;
  std::optional<double> ccr_v;
};

std::optional<double> run_pesq(const std::string& exe, const std::string& ref,
                               const std::string& deg, std::string* error) {
  const std::string cmd = "'" + exe + "' '" + ref + "' '" + deg + "' 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    *error = "pesq adapter: popen failed";
    return std::nullopt;
  }
  double score = 0.0;
  const int got = fscanf(pipe, "%lf", &score);
  const int status = pclose(pipe);
  if (got != 1 || status != 0) {
    *error = "pesq adapter: no score from '" + exe + "'";
    return std::nullopt;
  }
  return score;
}

}  // namespace

EvalReport evaluate(const EvalInputs& in, const corpus::Manifest& manifest,
                    const std::string& manifest_path) {
  if (!in.pesq_exe.empty() && in.scratch_dir.empty())
    throw InvalidInput("evaluate: pesq_exe needs a scratch_dir");

  std::vector<const corpus::ManifestRow*> rows;
  for (const auto& row : manifest.rows)
    if (row.split == "test") rows.push_back(&row);
  if (rows.empty()) throw InvalidInput("evaluate: manifest has no test rows");

  const size_t n_models = in.models.size();
  // scores[row][0] is the noisy pseudo-model, then in.models order.
  std::vector<std::vector<RowScore>> scores(
      rows.size(), std::vector<RowScore>(n_models + 1));

  if (!in.pesq_exe.empty())
    std::filesystem::create_directories(in.scratch_dir);

  const int workers = std::max(1, in.workers);
  auto worker_fn = [&](int w) {
    // Each worker scores with its own clones; layer caches are not shared.
    std::vector<models::Model> clones;
    clones.reserve(n_models);
    for (const auto& [name, model] : in.models) clones.push_back(model->clone());

    for (size_t r = size_t(w); r < rows.size(); r += size_t(workers)) {
      const corpus::ManifestRow& row = *rows[r];
      signal::Waveform clean, noisy;
      corpus::ArticulatoryTrack track;
      bool have_track = false;
      try {
        clean = signal::read_wav(
            corpus::resolve_path(manifest_path, row.clean_path));
        noisy = signal::read_wav(
            corpus::resolve_path(manifest_path, row.noisy_path));
      } catch (const Error& e) {
        for (size_t mi = 0; mi <= n_models; ++mi) {
          scores[r][mi].error = e.what();
        }
        continue;
      }

      std::string ref_wav;
      if (!in.pesq_exe.empty()) {
        ref_wav = in.scratch_dir + "/row" + std::to_string(r) + "_ref.wav";
        signal::write_wav(ref_wav, clean);
      }

      auto score_pair = [&](size_t mi, const signal::Waveform& processed,
                            const std::string& model_name) {
        RowScore& rs = scores[r][mi];
        rs.stoi_v = stoi(clean, processed);
        rs.si_sdr_v = si_sdr(clean, processed);
        if (!in.pesq_exe.empty()) {
          const std::string deg = in.scratch_dir + "/row" + std::to_string(r) +
                                  "_" + std::to_string(mi) + ".wav";
          signal::write_wav(deg, processed);
          std::string err;
          rs.pesq_v = run_pesq(in.pesq_exe, ref_wav, deg, &err);
          if (!rs.pesq_v && rs.error.empty()) rs.error = err;
        }
        auto hyp_map = in.hyp_transcripts.find(model_name);
        auto ref_it = in.ref_transcripts.find(row.utterance_id);
        if (hyp_map != in.hyp_transcripts.end() &&
            ref_it != in.ref_transcripts.end()) {
          auto hyp_it = hyp_map->second.find(row.utterance_id);
          if (hyp_it != hyp_map->second.end())
            rs.ccr_v = ccr(ref_it->second, hyp_it->second);
        }
        rs.ok = true;
      };

      try {
        score_pair(0, noisy, "noisy");
      } catch (const Error& e) {
        scores[r][0].ok = false;
        scores[r][0].error = e.what();
      }

      for (size_t mi = 0; mi < n_models; ++mi) {
        models::Model& model = clones[mi];
        const bool wants_emma =
            model.spec().fusion != models::FusionStrategy::kAudioOnly;
        try {
          if (wants_emma && !have_track) {
            track = corpus::read_track(
                corpus::resolve_path(manifest_path, row.track_path));
            have_track = true;
          }
          signal::Waveform enhanced =
              models::enhance(model, noisy, wants_emma ? &track : nullptr,
                              models::speaker_of(row.utterance_id));
          score_pair(mi + 1, enhanced, in.models[mi].first);
        } catch (const Error& e) {
          scores[r][mi + 1].ok = false;
          scores[r][mi + 1].error = e.what();
        }
      }
    }
  };

  if (workers == 1) {
    worker_fn(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker_fn, w);
    for (auto& t : pool) t.join();
  }

  // Deterministic merge: cells keyed and ordered by (snr, noise).
  EvalReport report;
  report.version = std::string(kToolName) + " " + kToolVersion;
  report.config_hash = in.config_hash;
  report.baseline = in.baseline.empty() ? "noisy" : in.baseline;

  std::vector<std::string> names{"noisy"};
  for (const auto& [name, model] : in.models) names.push_back(name);

  for (size_t mi = 0; mi < names.size(); ++mi) {
    ModelEval me;
    me.name = names[mi];
    std::map<std::pair<double, std::string>, EvalCell> cells;
    for (size_t r = 0; r < rows.size(); ++r) {
      const RowScore& rs = scores[r][mi];
      if (!rs.ok) {
        report.row_errors.push_back("model " + me.name + ", utterance " +
                                    rows[r]->utterance_id + ", noise " +
                                    rows[r]->noise_id + " @ " +
                                    corpus::format_db(rows[r]->snr_db) +
                                    " dB: " + rs.error);
        continue;
      }
      EvalCell& cell = cells[{rows[r]->snr_db, rows[r]->noise_id}];
      cell.count += 1;
      cell.stoi_sum += rs.stoi_v;
      cell.si_sdr_sum += rs.si_sdr_v;
      if (rs.pesq_v) {
        cell.pesq_sum += *rs.pesq_v;
        cell.pesq_count += 1;
      }
      if (rs.ccr_v) {
        cell.ccr_sum += *rs.ccr_v;
        cell.ccr_count += 1;
      }
      if (!rs.error.empty())  // e.g. pesq adapter failure on a scored row
        report.row_errors.push_back("model " + me.name + ", utterance " +
                                    rows[r]->utterance_id + ": " + rs.error);
    }
    std::map<double, EvalCell> by_snr;
    for (const auto& [key, cell] : cells) {
      me.cells.emplace_back(key.first, key.second, cell);
      by_snr[key.first].add(cell);
    }
    for (const auto& [snr, cell] : by_snr) {
      me.by_snr.emplace_back(snr, cell);
      me.overall.add(cell);
    }
    report.models.push_back(std::move(me));
  }
  return report;
}

namespace {

std::string fmt(double v, const char* spec = "%.6f") {
  char buf[48];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string opt_fmt(const std::optional<double>& v) {
  return v ? fmt(*v) : std::string("-");
}

const ModelEval* find_model(const EvalReport& r, const std::string& name) {
  for (const auto& m : r.models)
    if (m.name == name) return &m;
  return nullptr;
}

const EvalCell* snr_cell(const ModelEval& m, double snr) {
  for (const auto& [s, cell] : m.by_snr)
    if (s == snr) return &cell;
  return nullptr;
}

}  // namespace

void write_report_tsv(const std::string& path, const EvalReport& r) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create report: " + path);
  const ModelEval* base = find_model(r, r.baseline);
  out << "# aamse-eval v1\n";
  out << "# version=" << r.version << "\n";
  out << "# config_hash=" << r.config_hash << "\n";
  out << "# baseline=" << r.baseline << "\n";
  out << "model\tsnr_db\tnoise_id\tcount\tstoi\tsi_sdr\tpesq\tccr\td_stoi"
      << "\td_si_sdr\n";
  for (const auto& m : r.models) {
    for (const auto& [snr, cell] : m.by_snr) {
      const EvalCell* ref = base ? snr_cell(*base, snr) : nullptr;
      out << m.name << "\t" << corpus::format_db(snr) << "\t*\t" << cell.count
          << "\t" << fmt(cell.mean_stoi()) << "\t"
          << fmt(cell.mean_si_sdr(), "%.4f") << "\t"
          << opt_fmt(cell.mean_pesq()) << "\t" << opt_fmt(cell.mean_ccr())
          << "\t"
          << (ref ? fmt(cell.mean_stoi() - ref->mean_stoi(), "%+.6f")
                  : std::string("-"))
          << "\t"
          << (ref ? fmt(cell.mean_si_sdr() - ref->mean_si_sdr(), "%+.4f")
                  : std::string("-"))
          << "\n";
    }
    out << m.name << "\t*\t*\t" << m.overall.count << "\t"
        << fmt(m.overall.mean_stoi()) << "\t"
        << fmt(m.overall.mean_si_sdr(), "%.4f") << "\t"
        << opt_fmt(m.overall.mean_pesq()) << "\t"
        << opt_fmt(m.overall.mean_ccr()) << "\t"
        << (base ? fmt(m.overall.mean_stoi() - base->overall.mean_stoi(),
                       "%+.6f")
                 : std::string("-"))
        << "\t"
        << (base ? fmt(m.overall.mean_si_sdr() - base->overall.mean_si_sdr(),
                       "%+.4f")
                 : std::string("-"))
        << "\n";
  }
  if (!out) throw IoError("short write: " + path);
}

void write_report_json(const std::string& path, const EvalReport& r) {
  using json = nlohmann::ordered_json;
  auto cell_json = [](const EvalCell& c) {
    json j;
    j["count"] = c.count;
    j["stoi"] = c.mean_stoi();
    j["si_sdr"] = c.mean_si_sdr();
    if (auto p = c.mean_pesq()) j["pesq"] = *p;
    if (auto v = c.mean_ccr()) j["ccr"] = *v;
    return j;
  };

  json doc;
  doc["format"] = "aamse-eval v1";
  doc["version"] = r.version;
  doc["config_hash"] = r.config_hash;
  doc["baseline"] = r.baseline;
  json jmodels = json::array();
  for (const auto& m : r.models) {
    json jm;
    jm["name"] = m.name;
    json jcells = json::array();
    for (const auto& [snr, noise, cell] : m.cells) {
      json jc = cell_json(cell);
      jc["snr_db"] = snr;
      jc["noise_id"] = noise;
      jcells.push_back(jc);
    }
    jm["cells"] = jcells;
    json jsnr = json::array();
    for (const auto& [snr, cell] : m.by_snr) {
      json jc = cell_json(cell);
      jc["snr_db"] = snr;
      jsnr.push_back(jc);
    }
    jm["by_snr"] = jsnr;
    jm["overall"] = cell_json(m.overall);
    jmodels.push_back(jm);
  }
  doc["models"] = jmodels;
  doc["row_errors"] = r.row_errors;

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create report: " + path);
  out << doc.dump(2) << "\n";
  if (!out) throw IoError("short write: " + path);
}

void write_series_files(const std::string& dir, const EvalReport& r) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  for (const auto& m : r.models) {
    std::ofstream out(fs::path(dir) / ("series_" + m.name + ".tsv"),
                      std::ios::binary | std::ios::trunc);
    out << "snr_db\tstoi\tsi_sdr\n";
    for (const auto& [snr, cell] : m.by_snr)
      out << corpus::format_db(snr) << "\t" << fmt(cell.mean_stoi()) << "\t"
          << fmt(cell.mean_si_sdr(), "%.4f") << "\n";
  }
}

}  // namespace aamse::metrics
