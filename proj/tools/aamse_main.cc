// tools/aamse_main.cc

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Batch entry point: corpus synthesis, training, enhancement, evaluation.
// Exit codes: 0 success, 2 argument error, 3 runtime error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "aamse/common.h"
#include "aamse/corpus/manifest.h"
#include "aamse/corpus/synth.h"
#include "aamse/metrics/evaluate.h"
#include "aamse/models/checkpoint.h"
#include "aamse/models/train.h"

namespace fs = std::filesystem;
using namespace aamse;

namespace {

// Argument problems detected after CLI11 parsing still exit with code 2.
struct ArgError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Expands `--config FILE` into inline `--key value` pairs injected right
// after the subcommand token. Typed flags stay later in the argument list,
// so with take-last options the command line wins over the file; unknown
// config keys surface as unknown flags (argument error).
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  for (size_t i = 0; i < args.size(); ++i) {
    std::string file;
    size_t width = 0;
    if (args[i] == "--config" && i + 1 < args.size()) {
      file = args[i + 1];
      width = 2;
    } else if (args[i].rfind("--config=", 0) == 0) {
      file = args[i].substr(9);
      width = 1;
    }
    if (width == 0) continue;

    std::ifstream in(file);
    if (!in) throw ArgError("cannot open config file: " + file);
    std::vector<std::string> injected;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ArgError(file + ":" + std::to_string(lineno) +
                       ": expected key=value");
      injected.push_back("--" + line.substr(0, eq));
      injected.push_back(line.substr(eq + 1));
    }
    args.erase(args.begin() + long(i), args.begin() + long(i + width));
    const size_t at = args.empty() ? 0 : 1;  // right after the subcommand
    args.insert(args.begin() + long(at), injected.begin(), injected.end());
    break;
  }
  return args;
}

std::vector<double> parse_db_list(const std::string& csv, const char* what) {
  std::vector<double> out;
  std::istringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ArgError(std::string(what) + ": cannot parse dB value '" + tok +
                     "'");
    }
  }
  if (out.empty()) throw ArgError(std::string(what) + ": empty list");
  return out;
}

std::vector<std::string> parse_sensor_list(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      corpus::sensor_index(tok);
    } catch (const Error& e) {
      throw ArgError(e.what());
    }
    out.push_back(tok);
  }
  if (out.empty()) throw ArgError("--sensors: empty sensor list");
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Writes the resolved settings (sorted key=value) and returns the config
// hash computed over exactly those bytes.
std::string write_config_snapshot(
    const std::string& out_dir,
    std::vector<std::pair<std::string, std::string>> settings) {
  std::sort(settings.begin(), settings.end());
  std::string body;
  for (const auto& [k, v] : settings) body += k + "=" + v + "\n";
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a64(body)));
  fs::create_directories(out_dir);
  std::ofstream out(fs::path(out_dir) / "config.resolved.txt",
                    std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write config snapshot in " + out_dir);
  out << "# config_hash=" << hash << "\n" << body;
  return hash;
}

std::map<std::string, std::string> load_transcripts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open transcript file: " + path);
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw IoError(path + ": expected 'utterance<TAB>text' lines");
    out[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return out;
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  std::string out;
  size_t utts = 12;
  double dur = 2.0;
  double coupling = 1.0;
  uint64_t seed = 0;
  int speakers = 1;
  int train_noises = 8;
  int test_noises = 7;
  std::string train_snrs = "-10,-7,-4,-1,1,4,7,10";
  std::string test_snrs = "-8,-5,-2,0,2,5";
  int noises_per_utt = 5;
  size_t train_utts = 0;  // 0 = auto split
};

int cmd_synth(const SynthArgs& a) {
  corpus::MixPlan plan;
  plan.train_snrs = parse_db_list(a.train_snrs, "--train-snrs");
  plan.test_snrs = parse_db_list(a.test_snrs, "--test-snrs");
  plan.noises_per_utterance = a.noises_per_utt;
  plan.seed = a.seed;
  plan.train_count = a.train_utts;

  corpus::SynthParams sp;
  sp.n_utts = a.utts;
  sp.dur_s = a.dur;
  sp.coupling = a.coupling;
  sp.seed = a.seed;
  sp.n_speakers = a.speakers;
  sp.n_train_noises = a.train_noises;
  sp.n_test_noises = a.test_noises;

  write_config_snapshot(
      a.out,
      {{"command", "synth"},
       {"utts", std::to_string(a.utts)},
       {"dur", format_double(a.dur)},
       {"coupling", format_double(a.coupling)},
       {"seed", std::to_string(a.seed)},
       {"speakers", std::to_string(a.speakers)},
       {"train_noises", std::to_string(a.train_noises)},
       {"test_noises", std::to_string(a.test_noises)},
       {"train_snrs", a.train_snrs},
       {"test_snrs", a.test_snrs},
       {"noises_per_utt", std::to_string(a.noises_per_utt)},
       {"train_utts", std::to_string(a.train_utts)}});

  log::info() << "synthesizing " << a.utts << " utterances of "
              << a.dur << " s (coupling " << a.coupling << ")";
  corpus::SynthCorpus corpus_data = corpus::synth_corpus(sp);
  corpus::Manifest manifest =
      corpus::build_manifest(corpus_data.items, corpus_data.noises, plan);
  corpus::materialize_corpus(a.out, corpus_data, manifest);
  corpus::write_manifest((fs::path(a.out) / "manifest.tsv").string(), manifest);
  log::info() << "wrote " << manifest.rows.size() << " manifest rows under "
              << a.out;
  return 0;
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string manifest;
  std::string model_spec;
  std::string out;
  int epochs = 20;
  double lr = 0.0;
  std::string loss;
  uint64_t seed = 0;
  int patience = 0;
  std::string sensors;
};

int cmd_train(const TrainArgs& a) {
  models::ModelSpec spec = models::load_model_spec(a.model_spec);
  if (!a.sensors.empty()) spec.sensors = parse_sensor_list(a.sensors);
  if (!a.loss.empty() && a.loss != "l1" && a.loss != "l2")
    throw ArgError("--loss must be l1 or l2");

  models::TrainConfig cfg;
  cfg.loss = a.loss;
  cfg.lr = a.lr;
  cfg.epochs = a.epochs;
  cfg.seed = a.seed;
  cfg.patience = a.patience;

  const nn::LossKind loss = models::resolve_loss(spec, cfg.loss);
  const double lr = models::resolve_lr(spec, cfg.lr);
  std::string sensors_csv;
  for (const auto& s : spec.effective_sensors()) {
    if (!sensors_csv.empty()) sensors_csv += ",";
    sensors_csv += s;
  }
  const std::string hash = write_config_snapshot(
      a.out, {{"command", "train"},
              {"manifest", a.manifest},
              {"backbone", models::backbone_name(spec.backbone)},
              {"fusion", models::fusion_name(spec.fusion)},
              {"sensors", sensors_csv},
              {"epochs", std::to_string(a.epochs)},
              {"lr", format_double(lr)},
              {"loss", nn::loss_name(loss)},
              {"seed", std::to_string(a.seed)},
              {"patience", std::to_string(a.patience)}});

  models::Model model = models::build_model(spec, a.seed);
  log::info() << "training " << models::backbone_name(spec.backbone) << "/"
              << models::fusion_name(spec.fusion) << " ("
              << model.param_count() << " parameters)";
  corpus::Manifest manifest = corpus::read_manifest(a.manifest);
  models::TrainResult result =
      models::train(model, manifest, a.manifest, cfg);

  std::ofstream loss_log(fs::path(a.out) / "loss_log.tsv",
                         std::ios::binary | std::ios::trunc);
  loss_log << "epoch\tloss\n";
  for (size_t e = 0; e < result.epoch_loss.size(); ++e)
    loss_log << e << "\t" << format_double(result.epoch_loss[e]) << "\n";

  std::map<std::string, std::string> meta{
      {"loss", nn::loss_name(result.loss)},
      {"lr", format_double(result.lr)},
      {"epochs", std::to_string(result.epochs_run)},
      {"train_seed", std::to_string(a.seed)},
      {"stft_window", "512"},
      {"stft_hop", "128"},
      {"config_hash", hash}};
  models::save_checkpoint((fs::path(a.out) / "checkpoint.aamse").string(),
                          model, meta);
  log::info() << "final loss " << result.epoch_loss.back() << " after "
              << result.epochs_run << " epochs";
  return 0;
}

// ---------------------------------------------------------------------------

struct EnhanceArgs {
  std::string manifest;
  std::string checkpoint;
  std::string out;
  std::string split = "test";
  int workers = 1;
};

int cmd_enhance(const EnhanceArgs& a) {
  if (a.split != "train" && a.split != "test")
    throw ArgError("--split must be train or test");
  write_config_snapshot(a.out, {{"command", "enhance"},
                                {"manifest", a.manifest},
                                {"checkpoint", a.checkpoint},
                                {"split", a.split},
                                {"workers", std::to_string(a.workers)}});

  models::Checkpoint ckpt = models::load_checkpoint(a.checkpoint);
  corpus::Manifest manifest = corpus::read_manifest(a.manifest);
  std::vector<const corpus::ManifestRow*> rows;
  for (const auto& row : manifest.rows)
    if (row.split == a.split) rows.push_back(&row);
  if (rows.empty()) throw InvalidInput("no " + a.split + " rows in manifest");

  fs::create_directories(fs::path(a.out) / "enhanced");
  const bool wants_emma =
      ckpt.model.spec().fusion != models::FusionStrategy::kAudioOnly;

  std::vector<std::string> errors(rows.size());
  const int workers = std::max(1, a.workers);
  auto work = [&](int w) {
    models::Model model = ckpt.model.clone();
    for (size_t r = size_t(w); r < rows.size(); r += size_t(workers)) {
      const corpus::ManifestRow& row = *rows[r];
      try {
        signal::Waveform noisy =
            signal::read_wav(corpus::resolve_path(a.manifest, row.noisy_path));
        corpus::ArticulatoryTrack track;
        if (wants_emma)
          track = corpus::read_track(
              corpus::resolve_path(a.manifest, row.track_path));
        signal::Waveform enhanced =
            models::enhance(model, noisy, wants_emma ? &track : nullptr,
                            models::speaker_of(row.utterance_id));
        const std::string name = fs::path(row.noisy_path).filename().string();
        signal::write_wav((fs::path(a.out) / "enhanced" / name).string(),
                          enhanced);
      } catch (const Error& e) {
        errors[r] = e.what();
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  int failed = 0;
  for (size_t r = 0; r < rows.size(); ++r) {
    if (errors[r].empty()) continue;
    ++failed;
    log::error() << "row " << rows[r]->utterance_id << " ("
                 << rows[r]->noise_id << " @ "
                 << corpus::format_db(rows[r]->snr_db)
                 << " dB): " << errors[r];
  }
  if (failed > 0) {
    log::error() << failed << "/" << rows.size() << " rows failed";
    return 3;
  }
  log::info() << "enhanced " << rows.size() << " rows into " << a.out;
  return 0;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string manifest;
  std::vector<std::string> checkpoints;  // PATH or NAME=PATH
  std::string out;
  std::string baseline;
  int workers = 1;
  std::string sensors;
  std::string pesq_exe;
  std::string refs;
  std::vector<std::string> hyps;  // NAME=FILE
};

int cmd_eval(const EvalArgs& a) {
  std::vector<std::pair<std::string, std::string>> named;
  for (const auto& c : a.checkpoints) {
    auto eq = c.find('=');
    if (eq == std::string::npos) {
      named.emplace_back(fs::path(c).stem().string(), c);
    } else {
      named.emplace_back(c.substr(0, eq), c.substr(eq + 1));
    }
  }
  for (size_t i = 0; i < named.size(); ++i)
    for (size_t j = i + 1; j < named.size(); ++j)
      if (named[i].first == named[j].first)
        throw ArgError("duplicate model name '" + named[i].first +
                       "'; use NAME=PATH to disambiguate");

  std::vector<std::string> sensors;
  if (!a.sensors.empty()) sensors = parse_sensor_list(a.sensors);

  std::vector<models::Checkpoint> ckpts;
  metrics::EvalInputs in;
  for (const auto& [name, path] : named) {
    ckpts.push_back(models::load_checkpoint(path));
    const auto& spec = ckpts.back().model.spec();
    if (!sensors.empty() &&
        spec.fusion != models::FusionStrategy::kAudioOnly &&
        spec.effective_sensors() != sensors)
      throw ArgError("--sensors does not match checkpoint '" + name +
                     "' (trained on a different sensor set)");
    in.models.emplace_back(name, &ckpts.back().model);
  }
  if (!a.baseline.empty()) {
    bool known = a.baseline == "noisy";
    for (const auto& [name, m] : in.models) known |= (name == a.baseline);
    if (!known) throw ArgError("--baseline '" + a.baseline + "' is not a model");
  }

  std::string ckpts_csv;
  for (const auto& [name, path] : named) {
    if (!ckpts_csv.empty()) ckpts_csv += ",";
    ckpts_csv += name;
  }
  const std::string hash = write_config_snapshot(
      a.out, {{"command", "eval"},
              {"manifest", a.manifest},
              {"models", ckpts_csv},
              {"baseline", a.baseline.empty() ? "noisy" : a.baseline},
              {"sensors", a.sensors},
              {"workers", std::to_string(a.workers)},
              {"pesq_exe", a.pesq_exe}});

  in.baseline = a.baseline;
  in.workers = a.workers;
  in.config_hash = hash;
  in.pesq_exe = a.pesq_exe;
  in.scratch_dir = (fs::path(a.out) / "pesq_tmp").string();
  if (!a.refs.empty()) in.ref_transcripts = load_transcripts(a.refs);
  for (const auto& h : a.hyps) {
    auto eq = h.find('=');
    if (eq == std::string::npos)
      throw ArgError("--hyps expects NAME=FILE, got '" + h + "'");
    in.hyp_transcripts[h.substr(0, eq)] = load_transcripts(h.substr(eq + 1));
  }

  corpus::Manifest manifest = corpus::read_manifest(a.manifest);
  metrics::EvalReport report = metrics::evaluate(in, manifest, a.manifest);

  metrics::write_report_tsv((fs::path(a.out) / "report.tsv").string(), report);
  metrics::write_report_json((fs::path(a.out) / "report.json").string(),
                             report);
  metrics::write_series_files(a.out, report);

  for (const auto& err : report.row_errors) log::error() << err;
  if (!report.row_errors.empty()) {
    log::error() << report.row_errors.size() << " row failures";
    return 3;
  }
  log::info() << "evaluation report written to " << a.out;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"audio-articulatory speech enhancement toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version",
                       std::string(kToolName) + " " + kToolVersion);

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand(
      "synth", "generate a paired synthetic corpus with SNR-exact mixtures");
  synth->option_defaults()->multi_option_policy(
      CLI::MultiOptionPolicy::TakeLast);
  std::string synth_config_file;
  synth->add_option("--config", synth_config_file,
                    "key=value settings file (expanded first; flags win)");
  synth->add_option("--out", synth_args.out, "output corpus directory")
      ->required();
  synth->add_option("--utts", synth_args.utts, "number of utterances")
      ->check(CLI::PositiveNumber);
  synth->add_option("--dur", synth_args.dur, "utterance duration, seconds")
      ->check(CLI::PositiveNumber);
  synth->add_option("--coupling", synth_args.coupling,
                    "audio/track latent coupling in [0,1]")
      ->check(CLI::Range(0.0, 1.0));
  synth->add_option("--seed", synth_args.seed, "corpus seed");
  synth->add_option("--speakers", synth_args.speakers, "speaker count")
      ->check(CLI::PositiveNumber);
  synth->add_option("--train-noises", synth_args.train_noises,
                    "training noise pool size")
      ->check(CLI::PositiveNumber);
  synth->add_option("--test-noises", synth_args.test_noises,
                    "test noise pool size")
      ->check(CLI::PositiveNumber);
  synth->add_option("--train-snrs", synth_args.train_snrs,
                    "training SNR levels, dB csv");
  synth->add_option("--test-snrs", synth_args.test_snrs,
                    "test SNR levels, dB csv");
  synth->add_option("--noises-per-utt", synth_args.noises_per_utt,
                    "train noises drawn per utterance")
      ->check(CLI::PositiveNumber);
  synth->add_option("--train-utts", synth_args.train_utts,
                    "leading utterances in the train split (0 = auto)");

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "train a model");
  train->option_defaults()->multi_option_policy(
      CLI::MultiOptionPolicy::TakeLast);
  std::string train_config_file;
  train->add_option("--config", train_config_file,
                    "key=value settings file (expanded first; flags win)");
  train->add_option("--manifest", train_args.manifest, "corpus manifest")
      ->required();
  train->add_option("--model-spec", train_args.model_spec, "model spec file")
      ->required();
  train->add_option("--out", train_args.out, "output directory")->required();
  train->add_option("--epochs", train_args.epochs, "training epochs")
      ->check(CLI::PositiveNumber);
  train->add_option("--lr", train_args.lr,
                    "learning rate (0 = backbone default)");
  train->add_option("--loss", train_args.loss, "l1|l2 (default per backbone)");
  train->add_option("--seed", train_args.seed, "run seed");
  train->add_option("--patience", train_args.patience,
                    "early-stop patience in epochs (0 = off)");
  train->add_option("--sensors", train_args.sensors,
                    "sensor subset override, e.g. UL,LL,LJ,T1");

  EnhanceArgs enhance_args;
  CLI::App* enhance = app.add_subcommand(
      "enhance", "write enhanced WAVs for manifest rows");
  enhance->option_defaults()->multi_option_policy(
      CLI::MultiOptionPolicy::TakeLast);
  std::string enhance_config_file;
  enhance->add_option("--config", enhance_config_file,
                    "key=value settings file (expanded first; flags win)");
  enhance->add_option("--manifest", enhance_args.manifest, "corpus manifest")
      ->required();
  enhance->add_option("--checkpoint", enhance_args.checkpoint,
                      "trained checkpoint")
      ->required();
  enhance->add_option("--out", enhance_args.out, "output directory")
      ->required();
  enhance->add_option("--split", enhance_args.split, "train|test");
  enhance->add_option("--workers", enhance_args.workers, "parallel workers")
      ->check(CLI::PositiveNumber);

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand(
      "eval", "score models on the test split and write reports");
  eval->option_defaults()->multi_option_policy(
      CLI::MultiOptionPolicy::TakeLast);
  std::string eval_config_file;
  eval->add_option("--config", eval_config_file,
                    "key=value settings file (expanded first; flags win)");
  eval->add_option("--manifest", eval_args.manifest, "corpus manifest")
      ->required();
  eval->add_option("--checkpoint", eval_args.checkpoints,
                   "checkpoint PATH or NAME=PATH (repeatable)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->required();
  eval->add_option("--out", eval_args.out, "output directory")->required();
  eval->add_option("--baseline", eval_args.baseline,
                   "model name the deltas compare against (default noisy)");
  eval->add_option("--workers", eval_args.workers, "parallel workers")
      ->check(CLI::PositiveNumber);
  eval->add_option("--sensors", eval_args.sensors,
                   "assert the ablation sensor set, e.g. UL,LL,LJ,T1");
  eval->add_option("--pesq-exe", eval_args.pesq_exe,
                   "external PESQ scorer: `exe ref.wav deg.wav` -> score");
  eval->add_option("--refs", eval_args.refs,
                   "reference transcripts (utt<TAB>text)");
  eval->add_option("--hyps", eval_args.hyps,
                   "hypothesis transcripts per model: NAME=FILE (repeatable)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const ArgError& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (synth->parsed()) return cmd_synth(synth_args);
    if (train->parsed()) return cmd_train(train_args);
    if (enhance->parsed()) return cmd_enhance(enhance_args);
    if (eval->parsed()) return cmd_eval(eval_args);
  } catch (const ArgError& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    log::error() << e.what();
    return 3;
  } catch (const std::exception& e) {
    log::error() << "unexpected: " << e.what();
    return 3;
  }
  return 0;
}
