// tests/test_models.cc

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <map>

#include "aamse/corpus/manifest.h"
#include "aamse/corpus/mix.h"
#include "aamse/corpus/synth.h"
#include "aamse/metrics/sdr.h"
#include "aamse/models/checkpoint.h"
#include "aamse/models/train.h"

using namespace aamse;
using namespace aamse::models;

namespace {

const Backbone kBackbones[3] = {Backbone::kFcn, Backbone::kTdnn,
                                Backbone::kBlstm};
const FusionStrategy kFusions[4] = {
    FusionStrategy::kAudioOnly, FusionStrategy::kDirectConcat,
    FusionStrategy::kUnilateralEncoding, FusionStrategy::kBilateralEncoding};

// Frozen at first build; a change here is an architecture change.
const std::map<std::string, size_t> kGoldenParamCounts = {
    {"fcn/audio_only", 5421697},   {"fcn/direct", 5548417},
    {"fcn/unilateral", 5419266},   {"fcn/bilateral", 6539301},
    {"tdnn/audio_only", 3107130},  {"tdnn/direct", 3130260},
    {"tdnn/unilateral", 2803034},  {"tdnn/bilateral", 2803034},
    {"blstm/audio_only", 4148757}, {"blstm/direct", 4184757},
    {"blstm/unilateral", 3471746}, {"blstm/bilateral", 3882942},
};

nn::Tensor const_tensor(size_t rows, size_t cols, double v) {
  return nn::Tensor(rows, cols, v);
}

double measured_snr(const signal::Waveform& clean,
                    const signal::Waveform& other) {
  signal::Waveform part;
  part.samples.resize(clean.size());
  for (size_t i = 0; i < clean.size(); ++i)
    part.samples[i] = other.samples[i] - clean.samples[i];
  return metrics::snr_db(clean, part);
}

}  // namespace

TEST_CASE("all twelve stock architectures build with stable parameter counts") {
  for (Backbone bb : kBackbones) {
    for (FusionStrategy fs : kFusions) {
      const std::string key =
          std::string(backbone_name(bb)) + "/" + fusion_name(fs);
      CAPTURE(key);
      Model a = build_model(default_spec(bb, fs), 7);
      Model b = build_model(default_spec(bb, fs), 7);
      CHECK(a.param_count() == kGoldenParamCounts.at(key));
      CHECK(b.param_count() == a.param_count());
    }
  }
}

TEST_CASE("fuse dimension bookkeeping and audio-first layout") {
  // waveform domain: 1xT + 18xT -> 19xT
  nn::Tensor s = const_tensor(1, 64, 2.0);
  nn::Tensor e = const_tensor(18, 64, 3.0);
  nn::Tensor v = fuse(s, e, FusionStrategy::kDirectConcat);
  CHECK(v.rows == 19);
  CHECK(v.cols == 64);
  for (size_t t = 0; t < 64; ++t) {
    CHECK(v.at(0, t) == 2.0);
    CHECK(v.at(1, t) == 3.0);
    CHECK(v.at(18, t) == 3.0);
  }

  // encoded articulatory branch down to one channel: 1xT + 1xT -> 2xT
  nn::Tensor e1 = const_tensor(1, 64, -1.0);
  CHECK(fuse(s, e1, FusionStrategy::kUnilateralEncoding).rows == 2);

  // spectral domain: 257xF + 18xF -> 275xF
  nn::Tensor sf = const_tensor(257, 10, 0.5);
  nn::Tensor ef = const_tensor(18, 10, 0.25);
  nn::Tensor vf = fuse(sf, ef, FusionStrategy::kDirectConcat);
  CHECK(vf.rows == 275);
  CHECK(vf.at(0, 0) == 0.5);
  CHECK(vf.at(257, 0) == 0.25);

  CHECK_THROWS_AS(
      fuse(s, const_tensor(18, 63, 0.0), FusionStrategy::kDirectConcat),
      ShapeError);
  CHECK_THROWS_AS(fuse(s, e, FusionStrategy::kAudioOnly), InvalidInput);
  // audio_only passthrough with an absent articulatory branch
  CHECK(fuse(s, nn::Tensor{}, FusionStrategy::kAudioOnly).rows == 1);
}

TEST_CASE("spec invariants are enforced at build time") {
  ModelSpec bad = default_spec(Backbone::kBlstm, FusionStrategy::kAudioOnly);
  bad.emma_encoder =
      default_spec(Backbone::kBlstm, FusionStrategy::kUnilateralEncoding)
          .emma_encoder;
  CHECK_THROWS_AS(build_model(bad), SpecError);

  ModelSpec bad2 =
      default_spec(Backbone::kBlstm, FusionStrategy::kUnilateralEncoding);
  bad2.audio_encoder =
      default_spec(Backbone::kBlstm, FusionStrategy::kBilateralEncoding)
          .audio_encoder;
  CHECK_THROWS_AS(build_model(bad2), SpecError);

  ModelSpec bad3 =
      default_spec(Backbone::kBlstm, FusionStrategy::kBilateralEncoding);
  bad3.emma_encoder.clear();
  CHECK_THROWS_AS(build_model(bad3), SpecError);

  // wrong final width: the error names the offending layer
  ModelSpec bad4 = default_spec(Backbone::kBlstm, FusionStrategy::kAudioOnly);
  bad4.se_network.back().out_dim = 100;
  try {
    build_model(bad4);
    FAIL("expected SpecError");
  } catch (const SpecError& e) {
    CHECK(std::string(e.what()).find("se_network[3]") != std::string::npos);
    CHECK(std::string(e.what()).find("expected 257") != std::string::npos);
  }
}

TEST_CASE("model spec text format round-trips and rejects unknown keys") {
  const std::string text =
      "backbone=blstm\n"
      "fusion=unilateral\n"
      "sensors=UL,LL,LJ,T1\n"
      "emma_encoder=blstm:36,blstm:36,blstm:36,dense:36,dense:36\n"
      "se_network=blstm:514,blstm:514,blstm:257,dense:257\n";
  ModelSpec spec = parse_model_spec(text);
  CHECK(spec.backbone == Backbone::kBlstm);
  CHECK(spec.fusion == FusionStrategy::kUnilateralEncoding);
  CHECK(spec.sensors == std::vector<std::string>{"UL", "LL", "LJ", "T1"});
  CHECK(spec.emma_channels() == 8);
  CHECK(spec.emma_encoder.size() == 5);
  CHECK(spec.se_network.size() == 4);

  ModelSpec back = parse_model_spec(serialize_model_spec(spec));
  CHECK(serialize_model_spec(back) == serialize_model_spec(spec));

  // minimal spec falls back to the stock stacks
  ModelSpec minimal = parse_model_spec("backbone=tdnn\nfusion=direct\n");
  CHECK(serialize_stack(minimal.se_network) ==
        serialize_stack(
            default_spec(Backbone::kTdnn, FusionStrategy::kDirectConcat)
                .se_network));

  CHECK_THROWS_AS(parse_model_spec("backbone=tdnn\nfusion=direct\nfoo=1\n"),
                  SpecError);
  CHECK_THROWS_AS(parse_model_spec("fusion=direct\n"), SpecError);
  CHECK_THROWS_AS(parse_model_spec("backbone=cnn\nfusion=direct\n"), SpecError);

  // context offsets survive the round trip
  ModelSpec ctx = parse_model_spec(
      "backbone=tdnn\nfusion=audio_only\n"
      "se_network=tdnn:257@-3,0,3,dense:771@-1,0,1,dense:257\n");
  CHECK(ctx.se_network[0].offsets == std::vector<int>{-3, 0, 3});
  CHECK(ctx.se_network[1].offsets == std::vector<int>{-1, 0, 1});
}

TEST_CASE("enhance keeps the input length for all twelve variants") {
  corpus::SynthCorpus c = corpus::synth_corpus(1, 1.3, 1.0, 31);
  signal::Waveform noisy =
      corpus::mix_at_snr(c.items[0].clean, c.noises[0].wave, 0.0, 5);
  REQUIRE(noisy.size() == 20800);

  for (Backbone bb : kBackbones) {
    for (FusionStrategy fs : kFusions) {
      CAPTURE(backbone_name(bb));
      CAPTURE(fusion_name(fs));
      Model model = build_model(default_spec(bb, fs), 3);
      const bool wants_emma = fs != FusionStrategy::kAudioOnly;
      signal::Waveform out = enhance(
          model, noisy, wants_emma ? &c.items[0].track : nullptr, "spk0");
      CHECK(out.size() == noisy.size());
    }
  }
}

TEST_CASE("spectral model with a zeroed final layer emits silence") {
  Model model = build_model(
      default_spec(Backbone::kBlstm, FusionStrategy::kAudioOnly), 9);
  std::vector<nn::ParamBlock> blocks;
  model.collect_params(blocks);
  // final dense(257) weight + bias are the last two blocks
  for (size_t i = blocks.size() - 2; i < blocks.size(); ++i)
    std::fill(blocks[i].value, blocks[i].value + blocks[i].count, 0.0);

  corpus::SynthCorpus c = corpus::synth_corpus(1, 0.7, 1.0, 32);
  signal::Waveform out = enhance(model, c.items[0].clean, nullptr);
  for (double s : out.samples) CHECK(std::fabs(s) < 1e-12);
}

TEST_CASE("enhance validates track presence and sensor coverage") {
  corpus::SynthCorpus c = corpus::synth_corpus(1, 0.7, 1.0, 33);
  Model audio_only = build_model(
      default_spec(Backbone::kBlstm, FusionStrategy::kAudioOnly), 1);
  Model fused = build_model(
      default_spec(Backbone::kBlstm, FusionStrategy::kDirectConcat), 1);

  CHECK_THROWS_AS(enhance(audio_only, c.items[0].clean, &c.items[0].track),
                  InvalidInput);
  CHECK_THROWS_AS(enhance(fused, c.items[0].clean, nullptr), InvalidInput);

  // track that lacks a sensor the model needs
  corpus::ArticulatoryTrack partial =
      corpus::select_sensors(c.items[0].track, {"UL", "LL"});
  CHECK_THROWS_AS(enhance(fused, c.items[0].clean, &partial), InvalidInput);
}

TEST_CASE("enhance is a pure function of checkpoint and inputs") {
  corpus::SynthCorpus c = corpus::synth_corpus(1, 0.7, 1.0, 34);
  signal::Waveform noisy =
      corpus::mix_at_snr(c.items[0].clean, c.noises[0].wave, 5.0, 6);
  Model model = build_model(
      default_spec(Backbone::kBlstm, FusionStrategy::kDirectConcat), 4);
  signal::Waveform a = enhance(model, noisy, &c.items[0].track, "spk0");
  signal::Waveform b = enhance(model, noisy, &c.items[0].track, "spk0");
  CHECK(a.samples == b.samples);
  Model copy = model.clone();
  signal::Waveform d = enhance(copy, noisy, &c.items[0].track, "spk0");
  CHECK(a.samples == d.samples);
}

TEST_CASE("checkpoint round trip preserves parameters, norm, and behavior") {
  const std::string path = "test_models_ckpt.aamse";
  ModelSpec spec = parse_model_spec(
      "backbone=blstm\nfusion=direct\nsensors=UL,LL,LJ,T1\n"
      "se_network=blstm:32,dense:257\n");
  Model model = build_model(spec, 11);
  model.norm.by_speaker["spk0"] =
      std::vector<std::pair<double, double>>(8, {1.25, 2.5});
  model.norm.by_speaker["*"] =
      std::vector<std::pair<double, double>>(8, {0.5, 3.0});
  save_checkpoint(path, model, {{"loss", "l1"}, {"lr", "0.0001"}});

  Checkpoint loaded = load_checkpoint(path);
  CHECK(loaded.meta.at("loss") == "l1");
  CHECK(serialize_model_spec(loaded.model.spec()) ==
        serialize_model_spec(spec));
  CHECK(loaded.model.norm.by_speaker.at("spk0")[0].first == 1.25);

  std::vector<nn::ParamBlock> a, b;
  model.collect_params(a);
  loaded.model.collect_params(b);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].count == b[i].count);
    for (size_t j = 0; j < a[i].count; ++j)
      CHECK(a[i].value[j] == b[i].value[j]);
  }

  corpus::SynthCorpus c = corpus::synth_corpus(1, 0.7, 1.0, 35);
  corpus::ArticulatoryTrack four =
      corpus::select_sensors(c.items[0].track, {"UL", "LL", "LJ", "T1"});
  signal::Waveform out1 = enhance(model, c.items[0].clean, &four, "spk0");
  signal::Waveform out2 = enhance(loaded.model, c.items[0].clean, &four, "spk0");
  CHECK(out1.samples == out2.samples);
  std::filesystem::remove(path);
}

TEST_CASE("clean magnitude with noisy phase beats the noisy input SNR") {
  corpus::SynthCorpus c = corpus::synth_corpus(2, 1.0, 1.0, 36);
  signal::StftParams p;
  for (const auto& item : c.items) {
    for (double snr : {-8.0, -2.0, 5.0}) {
      signal::Waveform noisy =
          corpus::mix_at_snr(item.clean, c.noises.back().wave, snr, 8);
      signal::Waveform oracle = oracle_magnitude_enhance(item.clean, noisy, p);
      CHECK(measured_snr(item.clean, oracle) > measured_snr(item.clean, noisy));
    }
  }
}

TEST_CASE("loss kind and learning rate resolve per backbone") {
  ModelSpec fcn = default_spec(Backbone::kFcn, FusionStrategy::kAudioOnly);
  ModelSpec tdnn = default_spec(Backbone::kTdnn, FusionStrategy::kAudioOnly);
  ModelSpec blstm = default_spec(Backbone::kBlstm, FusionStrategy::kAudioOnly);
  CHECK(resolve_loss(fcn, "") == nn::LossKind::kL2);
  CHECK(resolve_loss(tdnn, "") == nn::LossKind::kL1);
  CHECK(resolve_loss(blstm, "") == nn::LossKind::kL1);
  CHECK(resolve_loss(fcn, "l1") == nn::LossKind::kL1);
  CHECK(resolve_lr(fcn, 0.0) == 1e-3);
  CHECK(resolve_lr(blstm, 0.0) == 1e-4);
  CHECK(resolve_lr(blstm, 0.5) == 0.5);
}

TEST_CASE("training reduces loss deterministically on a tiny corpus") {
  const std::string dir = "test_models_train";
  corpus::SynthCorpus c = corpus::synth_corpus(1, 1.0, 1.0, 55);
  corpus::MixPlan plan;
  plan.seed = 55;
  plan.train_count = 1;
  plan.noises_per_utterance = 1;
  plan.train_snrs = {10.0};
  corpus::Manifest m = corpus::build_manifest(c.items, c.noises, plan);
  corpus::materialize_corpus(dir, c, m);
  const std::string manifest_path = dir + "/manifest.tsv";
  corpus::write_manifest(manifest_path, m);

  ModelSpec spec = parse_model_spec(
      "backbone=fcn\nfusion=audio_only\nse_network=conv1d:16:55,conv1d:1:55\n");
  TrainConfig cfg;
  cfg.epochs = 25;
  cfg.seed = 9;

  Model m1 = build_model(spec, 9);
  TrainResult r1 =
      train(m1, corpus::read_manifest(manifest_path), manifest_path, cfg);
  CHECK(r1.loss == nn::LossKind::kL2);
  CHECK(r1.lr == 1e-3);
  REQUIRE(r1.epoch_loss.size() == 26);  // pre-update entry + 25 epochs
  CHECK(r1.epoch_loss.back() < r1.epoch_loss.front());

  Model m2 = build_model(spec, 9);
  TrainResult r2 =
      train(m2, corpus::read_manifest(manifest_path), manifest_path, cfg);
  CHECK(r1.epoch_loss == r2.epoch_loss);  // bit-identical logs

  std::filesystem::remove_all(dir);
}

TEST_CASE("norm stats come from the training split per speaker") {
  const std::string dir = "test_models_norm";
  corpus::SynthParams sp;
  sp.n_utts = 4;
  sp.dur_s = 0.6;
  sp.coupling = 1.0;
  sp.seed = 66;
  sp.n_speakers = 2;
  corpus::SynthCorpus c = corpus::synth_corpus(sp);
  corpus::MixPlan plan;
  plan.seed = 66;
  plan.train_count = 4;
  plan.noises_per_utterance = 1;
  plan.train_snrs = {5.0};
  corpus::Manifest m = corpus::build_manifest(c.items, c.noises, plan);
  corpus::materialize_corpus(dir, c, m);
  const std::string manifest_path = dir + "/manifest.tsv";
  corpus::write_manifest(manifest_path, m);

  ModelSpec spec = parse_model_spec(
      "backbone=blstm\nfusion=direct\nse_network=blstm:16,dense:257\n");
  Model model = build_model(spec, 2);
  TrainConfig cfg;
  cfg.epochs = 1;
  train(model, corpus::read_manifest(manifest_path), manifest_path, cfg);

  REQUIRE(model.norm.by_speaker.count("spk0") == 1);
  REQUIRE(model.norm.by_speaker.count("spk1") == 1);
  REQUIRE(model.norm.by_speaker.count("*") == 1);
  CHECK(model.norm.by_speaker.at("spk0").size() == 18);
  // speakers have distinct anatomical offsets, so distinct means
  CHECK(model.norm.by_speaker.at("spk0")[0].first !=
        model.norm.by_speaker.at("spk1")[0].first);
  std::filesystem::remove_all(dir);
}
