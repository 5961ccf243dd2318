// core/src/models/train.cc

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "aamse/models/train.h"

#include <cmath>
#include <map>

#include "aamse/nn/adam.h"

namespace aamse::models {

nn::LossKind resolve_loss(const ModelSpec& spec, const std::string& requested) {
  if (!requested.empty()) return nn::loss_from_name(requested);
  return spec.backbone == Backbone::kFcn ? nn::LossKind::kL2
                                         : nn::LossKind::kL1;
}

double resolve_lr(const ModelSpec& spec, double requested) {
  if (requested < 0.0)
    throw InvalidInput("train: learning rate must be positive");
  if (requested > 0.0) return requested;
  return spec.backbone == Backbone::kFcn ? 1e-3 : 1e-4;
}

namespace {

struct UttData {
  signal::Waveform clean;
  corpus::ArticulatoryTrack track;  // selected sensors, raw millimeters
  nn::Tensor emma;                  // normalized + aligned
  nn::Tensor target;
};

struct RowData {
  nn::Tensor audio;
  const UttData* utt = nullptr;
  std::string utterance_id;
};

nn::Tensor spectro_tensor(const signal::Spectrogram& sp) {
  nn::Tensor t(size_t(kSpectralBins), sp.frames());
  for (size_t m = 0; m < sp.frames(); ++m)
    for (size_t k = 0; k < size_t(kSpectralBins); ++k)
      t.at(k, m) = sp.log_mag.at(m, k);
  return t;
}

Matrix fit_columns(const Matrix& m, size_t target) {
  if (m.cols() == target) return m;
  Matrix out(m.rows(), target);
  for (size_t r = 0; r < m.rows(); ++r) {
    const double* src = m.row(r);
    double* dst = out.row(r);
    for (size_t c = 0; c < target; ++c)
      dst[c] = src[c < m.cols() ? c : m.cols() - 1];
  }
  return out;
}

}  // namespace

TrainResult train(Model& model, const corpus::Manifest& manifest,
                  const std::string& manifest_path, const TrainConfig& cfg) {
  if (cfg.epochs < 1) throw InvalidInput("train: epochs must be >= 1");
  TrainResult result;
  result.loss = resolve_loss(model.spec(), cfg.loss);
  result.lr = resolve_lr(model.spec(), cfg.lr);

  const bool wants_emma = model.spec().fusion != FusionStrategy::kAudioOnly;
  const bool spectral = model.spec().backbone != Backbone::kFcn;
  const auto sensors = model.spec().effective_sensors();

  std::vector<const corpus::ManifestRow*> train_rows;
  for (const auto& row : manifest.rows)
    if (row.split == "train") train_rows.push_back(&row);
  if (train_rows.empty()) throw InvalidInput("train: manifest has no train rows");

  // Clean audio and tracks are shared across an utterance's mixtures.
  std::map<std::string, UttData> utts;
  for (const auto* row : train_rows) {
    if (utts.count(row->utterance_id)) continue;
    UttData& u = utts[row->utterance_id];
    u.clean = signal::read_wav(
        corpus::resolve_path(manifest_path, row->clean_path));
    if (wants_emma) {
      u.track = corpus::select_sensors(
          corpus::read_track(
              corpus::resolve_path(manifest_path, row->track_path)),
          sensors);
    }
  }

  // EMMA z-score statistics over the training split, per speaker plus the
  // pooled "*" fallback, computed before any update.
  if (wants_emma) {
    struct Accum {
      std::vector<double> sum, sq;
      size_t n = 0;
    };
    std::map<std::string, Accum> acc;
    const size_t chans = 2 * sensors.size();
    for (const auto& [utt_id, u] : utts) {
      for (const std::string& key : {speaker_of(utt_id), std::string("*")}) {
        Accum& a = acc[key];
        if (a.sum.empty()) {
          a.sum.assign(chans, 0.0);
          a.sq.assign(chans, 0.0);
        }
        for (size_t c = 0; c < chans; ++c) {
          const double* row = u.track.channels.row(c);
          for (size_t i = 0; i < u.track.length(); ++i) {
            a.sum[c] += row[i];
            a.sq[c] += row[i] * row[i];
          }
        }
        a.n += u.track.length();
      }
    }
    model.norm.by_speaker.clear();
    for (auto& [key, a] : acc) {
      std::vector<std::pair<double, double>> stats(chans);
      for (size_t c = 0; c < chans; ++c) {
        const double mean = a.sum[c] / double(a.n);
        const double var =
            std::max(0.0, a.sq[c] / double(a.n) - mean * mean);
        stats[c] = {mean, std::sqrt(var)};
      }
      model.norm.by_speaker[key] = std::move(stats);
    }
  }

  // Targets and aligned tracks per utterance, noisy features per row.
  for (auto& [utt_id, u] : utts) {
    if (spectral) {
      u.target = spectro_tensor(signal::stft(u.clean, model.stft_params()));
    } else {
      u.target = nn::Tensor(1, u.clean.size());
      u.target.v = u.clean.samples;
    }
    if (wants_emma) {
      corpus::ArticulatoryTrack normed = u.track;
      model.norm.apply(normed.channels, speaker_of(utt_id));
      if (spectral) {
        Matrix aligned = corpus::align_to_frames(normed, model.stft_params(),
                                                 u.clean.size());
        u.emma = nn::Tensor(aligned.rows(), aligned.cols());
        u.emma.v = aligned.data();
      } else {
        Matrix aligned = corpus::align_to_waveform(normed);
        long long diff =
            static_cast<long long>(u.clean.size()) - static_cast<long long>(aligned.cols());
        if (diff < -64 || diff > 64)
          throw AlignmentError("train: track/audio duration mismatch for " +
                               utt_id);
        aligned = fit_columns(aligned, u.clean.size());
        u.emma = nn::Tensor(aligned.rows(), aligned.cols());
        u.emma.v = aligned.data();
      }
    }
  }

  std::vector<RowData> rows;
  rows.reserve(train_rows.size());
  for (const auto* row : train_rows) {
    RowData rd;
    rd.utterance_id = row->utterance_id;
    rd.utt = &utts.at(row->utterance_id);
    signal::Waveform noisy = signal::read_wav(
        corpus::resolve_path(manifest_path, row->noisy_path));
    if (noisy.size() != rd.utt->clean.size())
      throw InvalidInput("train: clean/noisy length mismatch for " +
                         row->utterance_id);
    if (spectral) {
      rd.audio = spectro_tensor(signal::stft(noisy, model.stft_params()));
    } else {
      rd.audio = nn::Tensor(1, noisy.size());
      rd.audio.v = std::move(noisy.samples);
    }
    rows.push_back(std::move(rd));
  }

  std::vector<nn::ParamBlock> blocks;
  model.collect_params(blocks);
  nn::AdamConfig adam_cfg;
  adam_cfg.lr = result.lr;
  nn::Adam adam(adam_cfg);

  auto row_loss = [&](RowData& rd, nn::Tensor* grad) {
    const nn::Tensor* emma = wants_emma ? &rd.utt->emma : nullptr;
    nn::Tensor pred = model.forward(rd.audio, emma);
    return nn::loss(result.loss, pred, rd.utt->target, grad);
  };

  // Entry 0: loss of the freshly built model, no updates.
  {
    double sum = 0.0;
    for (auto& rd : rows) sum += row_loss(rd, nullptr);
    result.epoch_loss.push_back(sum / double(rows.size()));
  }

  double best = result.epoch_loss[0];
  int stale = 0;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::vector<size_t> order(rows.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(derive_seed(cfg.seed, "epoch|" + std::to_string(epoch)));
    rng.shuffle(order);

    double sum = 0.0;
    for (size_t idx : order) {
      RowData& rd = rows[idx];
      model.zero_grad();
      nn::Tensor grad;
      sum += row_loss(rd, &grad);
      model.backward(grad);
      nn::clip_global_norm(blocks, cfg.clip_norm);
      try {
        adam.step(blocks);
      } catch (const NumericalError& e) {
        throw NumericalError(std::string(e.what()) + " (utterance " +
                             rd.utterance_id + ")");
      }
    }
    result.epoch_loss.push_back(sum / double(rows.size()));
    result.epochs_run = epoch;

    if (cfg.patience > 0) {
      const double current = result.epoch_loss.back();
      if (current < best - 1e-12) {
        best = current;
        stale = 0;
      } else if (++stale >= cfg.patience) {
        log::info() << "early stop after epoch " << epoch << " (patience "
                    << cfg.patience << ")";
        break;
      }
    }
  }
  return result;
}

}  // namespace aamse::models
