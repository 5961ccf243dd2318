// tests/test_metrics.cc

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <doctest.h>

#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "aamse/corpus/manifest.h"
#include "aamse/corpus/mix.h"
#include "aamse/corpus/synth.h"
#include "aamse/metrics/edit.h"
#include "aamse/metrics/evaluate.h"
#include "aamse/metrics/sdr.h"
#include "aamse/metrics/stoi.h"
#include "aamse/models/model.h"

using namespace aamse;
using namespace aamse::metrics;

namespace {

// Exhaustive minimum over all order-preserving alignments; independent of
// the DP route. Strings must be short enough for bitmask enumeration.
size_t lev_oracle(std::string_view a, std::string_view b) {
  const size_t m = a.size(), n = b.size();
  REQUIRE(m <= 16);
  REQUIRE(n <= 16);
  size_t best = m + n;
  for (uint32_t ma = 0; ma < (1u << m); ++ma) {
    const int k = std::popcount(ma);
    for (uint32_t mb = 0; mb < (1u << n); ++mb) {
      if (std::popcount(mb) != k) continue;
      size_t cost = (m - size_t(k)) + (n - size_t(k));
      uint32_t ta = ma, tb = mb;
      for (int i = 0; i < k; ++i) {
        const int pa = std::countr_zero(ta);
        const int pb = std::countr_zero(tb);
        ta &= ta - 1;
        tb &= tb - 1;
        if (a[size_t(pa)] != b[size_t(pb)]) ++cost;
      }
      best = std::min(best, cost);
    }
  }
  return best;
}

std::string random_string(Rng& rng, size_t max_len) {
  const char alphabet[3] = {'a', 'b', 'c'};
  std::string s;
  const size_t len = size_t(rng.below(max_len + 1));
  for (size_t i = 0; i < len; ++i) s.push_back(alphabet[rng.below(3)]);
  return s;
}

signal::Waveform speechlike(double seconds, uint64_t seed) {
  corpus::SynthCorpus c = corpus::synth_corpus(1, seconds, 1.0, seed);
  return c.items[0].clean;
}

signal::Waveform white_noise(size_t n, uint64_t seed, double target_rms) {
  Rng rng(seed);
  signal::Waveform w;
  w.samples.resize(n);
  for (auto& s : w.samples) s = rng.normal();
  const double g = target_rms / signal::rms(w.samples);
  for (auto& s : w.samples) s *= g;
  return w;
}

}  // namespace

TEST_CASE("levenshtein basics") {
  CHECK(levenshtein("abc", "abc") == 0);
  CHECK(levenshtein("", "abc") == 3);
  CHECK(levenshtein("abc", "") == 3);
  CHECK(levenshtein("", "") == 0);
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("kitten", "sitting") == lev_oracle("kitten", "sitting"));
}

TEST_CASE("levenshtein agrees with the exhaustive alignment oracle") {
  Rng rng(404);
  for (int i = 0; i < 300; ++i) {
    const std::string a = random_string(rng, 6);
    const std::string b = random_string(rng, 6);
    CAPTURE(a);
    CAPTURE(b);
    CHECK(levenshtein(a, b) == lev_oracle(a, b));
  }
}

TEST_CASE("levenshtein is a metric on random short strings") {
  Rng rng(405);
  for (int i = 0; i < 200; ++i) {
    const std::string a = random_string(rng, 6);
    const std::string b = random_string(rng, 6);
    const std::string c = random_string(rng, 6);
    CHECK(levenshtein(a, b) == levenshtein(b, a));
    CHECK((levenshtein(a, b) == 0) == (a == b));
    CHECK(levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c));
  }
}

TEST_CASE("character correct rate") {
  CHECK(ccr("abcd", "abcd") == 1.0);
  CHECK(ccr("abcd", "") == 0.0);
  CHECK(ccr("abcd", "abxd") == doctest::Approx(0.75));
  CHECK(ccr("ab", "abcdefgh") == 0.0);  // floored at zero
  CHECK_THROWS_AS(ccr("", "abc"), InvalidInput);
}

TEST_CASE("si_sdr scale handling") {
  signal::Waveform ref = white_noise(8000, 1, 0.1);
  signal::Waveform twice = ref;
  for (auto& s : twice.samples) s *= 2.0;
  CHECK(si_sdr(ref, twice) >= 60.0);  // capped perfect estimate

  // est = ref + orthogonal noise of equal norm -> 0 dB
  signal::Waveform noise = white_noise(8000, 2, 0.1);
  double dot = 0.0, ref_sq = 0.0;
  for (size_t i = 0; i < ref.size(); ++i) {
    dot += noise.samples[i] * ref.samples[i];
    ref_sq += ref.samples[i] * ref.samples[i];
  }
  signal::Waveform est = ref;
  double orth_sq = 0.0;
  std::vector<double> orth(ref.size());
  for (size_t i = 0; i < ref.size(); ++i) {
    orth[i] = noise.samples[i] - (dot / ref_sq) * ref.samples[i];
    orth_sq += orth[i] * orth[i];
  }
  const double scale = std::sqrt(ref_sq / orth_sq);
  for (size_t i = 0; i < ref.size(); ++i) est.samples[i] += scale * orth[i];
  CHECK(std::fabs(si_sdr(ref, est)) < 0.01);

  // invariance in the estimate's global gain
  signal::Waveform mix = white_noise(8000, 3, 0.1);
  for (size_t i = 0; i < mix.size(); ++i) mix.samples[i] += ref.samples[i];
  const double v1 = si_sdr(ref, mix);
  for (double alpha : {0.001, 0.37, 42.0}) {
    signal::Waveform scaled = mix;
    for (auto& s : scaled.samples) s *= alpha;
    CHECK(std::fabs(si_sdr(ref, scaled) - v1) < 1e-9);
  }

  CHECK_THROWS_AS(si_sdr(ref, white_noise(4000, 4, 0.1)), InvalidInput);
}

TEST_CASE("snr_db measures power ratios") {
  signal::Waveform ref = white_noise(5000, 5, 0.2);
  signal::Waveform tenth = ref;
  for (auto& s : tenth.samples) s *= 0.1;
  CHECK(snr_db(ref, tenth) == doctest::Approx(20.0).epsilon(1e-12));
  signal::Waveform silent;
  silent.samples.assign(5000, 0.0);
  CHECK_THROWS_AS(snr_db(silent, ref), InvalidInput);
}

TEST_CASE("stoi of a signal against itself is 1") {
  for (uint64_t seed : {101, 102, 103}) {
    signal::Waveform x = speechlike(1.0, seed);
    CHECK(stoi(x, x) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("stoi is invariant to the processed signal's global gain") {
  signal::Waveform x = speechlike(1.0, 104);
  signal::Waveform y =
      corpus::mix_at_snr(x, white_noise(32000, 6, 0.05), 0.0, 9);
  const double base = stoi(x, y);
  for (double gain : {0.01, 5.0}) {
    signal::Waveform scaled = y;
    for (auto& s : scaled.samples) s *= gain;
    CHECK(stoi(x, scaled) == doctest::Approx(base).epsilon(1e-6));
  }
}

TEST_CASE("stoi collapses against independent noise") {
  signal::Waveform x = speechlike(2.0, 105);
  // processed signal is unrelated noise, 10 dB hotter than the speech
  signal::Waveform bad =
      white_noise(x.size(), 7, signal::rms(x.samples) * std::pow(10.0, 0.5));
  CHECK(stoi(x, bad) < 0.3);
}

TEST_CASE("stoi is monotone in mixture SNR") {
  for (uint64_t seed = 0; seed < 6; ++seed) {
    signal::Waveform x = speechlike(1.0, 200 + seed);
    signal::Waveform n = white_noise(40000, 300 + seed, 0.05);
    const double low = stoi(x, corpus::mix_at_snr(x, n, -10.0, seed));
    const double high = stoi(x, corpus::mix_at_snr(x, n, 10.0, seed));
    CHECK(high >= low);
  }
}

TEST_CASE("stoi input validation") {
  signal::Waveform x = speechlike(1.0, 106);
  signal::Waveform short_x = x;
  short_x.samples.resize(4000);
  CHECK_THROWS_AS(stoi(short_x, short_x), InvalidInput);
  signal::Waveform y = x;
  y.samples.pop_back();
  CHECK_THROWS_AS(stoi(x, y), InvalidInput);
}

TEST_CASE("evaluate bookkeeping, deltas, and aggregate identity") {
  const std::string dir = "test_metrics_eval";
  corpus::SynthParams sp;
  sp.n_utts = 3;
  sp.dur_s = 0.8;
  sp.coupling = 1.0;
  sp.seed = 500;
  sp.n_train_noises = 2;
  sp.n_test_noises = 2;
  corpus::SynthCorpus c = corpus::synth_corpus(sp);
  corpus::MixPlan plan;
  plan.seed = 500;
  plan.train_count = 1;
  plan.noises_per_utterance = 2;
  plan.train_snrs = {0.0};
  plan.test_snrs = {-5.0, 0.0, 5.0};
  corpus::Manifest m = corpus::build_manifest(c.items, c.noises, plan);
  corpus::materialize_corpus(dir, c, m);
  const std::string manifest_path = dir + "/manifest.tsv";
  corpus::write_manifest(manifest_path, m);

  models::Model model = models::build_model(
      models::parse_model_spec(
          "backbone=blstm\nfusion=audio_only\nse_network=blstm:16,dense:257\n"),
      1);

  EvalInputs in;
  in.models.emplace_back("toy", &model);
  in.baseline = "toy";
  in.config_hash = "cafe";
  EvalReport report = evaluate(in, corpus::read_manifest(manifest_path),
                               manifest_path);
  CHECK(report.row_errors.empty());
  REQUIRE(report.models.size() == 2);  // noisy + toy
  CHECK(report.models[0].name == "noisy");
  CHECK(report.models[1].name == "toy");

  // 2 test utterances x 2 noises x 3 SNRs
  const ModelEval& toy = report.models[1];
  CHECK(toy.overall.count == 12);
  REQUIRE(toy.by_snr.size() == 3);
  for (const auto& [snr, cell] : toy.by_snr) CHECK(cell.count == 4);
  REQUIRE(toy.cells.size() == 6);
  for (const auto& [snr, noise, cell] : toy.cells) CHECK(cell.count == 2);

  // overall mean equals the count-weighted mean of per-SNR cells
  double weighted = 0.0;
  size_t n_rows = 0;
  for (const auto& [snr, cell] : toy.by_snr) {
    weighted += cell.mean_stoi() * double(cell.count);
    n_rows += cell.count;
  }
  CHECK(std::fabs(toy.overall.mean_stoi() - weighted / double(n_rows)) <
        1e-12);

  // identical workers produce identical reports
  in.workers = 2;
  EvalReport report2 = evaluate(in, corpus::read_manifest(manifest_path),
                                manifest_path);
  CHECK(report2.models[1].overall.stoi_sum == toy.overall.stoi_sum);
  CHECK(report2.models[1].overall.si_sdr_sum == toy.overall.si_sdr_sum);

  // baseline vs itself: written deltas are exactly zero
  write_report_tsv(dir + "/report.tsv", report);
  std::ifstream tsv(dir + "/report.tsv");
  std::string line;
  bool saw_toy_row = false;
  while (std::getline(tsv, line)) {
    if (line.rfind("toy\t", 0) != 0) continue;
    saw_toy_row = true;
    CHECK(line.find("\t+0.000000\t+0.0000") != std::string::npos);
  }
  CHECK(saw_toy_row);

  write_report_json(dir + "/report.json", report);
  CHECK(std::filesystem::exists(dir + "/report.json"));
  write_series_files(dir, report);
  CHECK(std::filesystem::exists(dir + "/series_toy.tsv"));

  std::filesystem::remove_all(dir);
}

TEST_CASE("evaluate records per-row failures and keeps going") {
  const std::string dir = "test_metrics_eval_err";
  corpus::SynthParams sp;
  sp.n_utts = 2;
  sp.dur_s = 0.8;
  sp.seed = 501;
  sp.n_train_noises = 1;
  sp.n_test_noises = 1;
  corpus::SynthCorpus c = corpus::synth_corpus(sp);
  corpus::MixPlan plan;
  plan.seed = 501;
  plan.train_count = 1;
  plan.noises_per_utterance = 1;
  plan.train_snrs = {0.0};
  plan.test_snrs = {0.0, 5.0};
  corpus::Manifest m = corpus::build_manifest(c.items, c.noises, plan);
  corpus::materialize_corpus(dir, c, m);
  const std::string manifest_path = dir + "/manifest.tsv";
  corpus::write_manifest(manifest_path, m);

  // fusion model with the track files removed: rows fail, run continues
  std::filesystem::remove_all(dir + "/tracks");
  models::Model fused = models::build_model(
      models::parse_model_spec(
          "backbone=blstm\nfusion=direct\nse_network=blstm:16,dense:257\n"),
      2);
  EvalInputs in;
  in.models.emplace_back("fused", &fused);
  EvalReport report =
      evaluate(in, corpus::read_manifest(manifest_path), manifest_path);
  CHECK(report.row_errors.size() == 2);
  CHECK(report.models[1].overall.count == 0);
  CHECK(report.models[0].overall.count == 2);  // noisy still scored
  std::filesystem::remove_all(dir);
}

TEST_CASE("evaluate attaches CCR when transcripts are supplied") {
  const std::string dir = "test_metrics_eval_ccr";
  corpus::SynthParams sp;
  sp.n_utts = 2;
  sp.dur_s = 0.8;
  sp.seed = 502;
  sp.n_train_noises = 1;
  sp.n_test_noises = 1;
  corpus::SynthCorpus c = corpus::synth_corpus(sp);
  corpus::MixPlan plan;
  plan.seed = 502;
  plan.train_count = 1;
  plan.noises_per_utterance = 1;
  plan.train_snrs = {0.0};
  plan.test_snrs = {0.0};
  corpus::Manifest m = corpus::build_manifest(c.items, c.noises, plan);
  corpus::materialize_corpus(dir, c, m);
  const std::string manifest_path = dir + "/manifest.tsv";
  corpus::write_manifest(manifest_path, m);

  models::Model model = models::build_model(
      models::parse_model_spec(
          "backbone=blstm\nfusion=audio_only\nse_network=blstm:16,dense:257\n"),
      3);
  const std::string test_utt = m.rows.back().utterance_id;
  EvalInputs in;
  in.models.emplace_back("toy", &model);
  in.ref_transcripts[test_utt] = "abcd";
  in.hyp_transcripts["toy"][test_utt] = "abxd";
  EvalReport report =
      evaluate(in, corpus::read_manifest(manifest_path), manifest_path);
  REQUIRE(report.models[1].overall.mean_ccr().has_value());
  CHECK(*report.models[1].overall.mean_ccr() == doctest::Approx(0.75));
  CHECK_FALSE(report.models[0].overall.mean_ccr().has_value());
  std::filesystem::remove_all(dir);
}
