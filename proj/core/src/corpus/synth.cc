// core/src/corpus/synth.cc

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "aamse/corpus/synth.h"

#include <cmath>
#include <cstdio>

namespace aamse::corpus {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kTargetRms = 0.05;

// Band-limited random Fourier series, standardized over the utterance's
// 250 Hz grid so the same continuous curve serves both sample rates.
class Latent {
 public:
  Latent(Rng& rng, size_t emma_len) {
    const int terms = 24;
    freq_.reserve(terms);
    amp_.reserve(terms);
    phase_.reserve(terms);
    for (int i = 0; i < terms; ++i) {
      double f = rng.range(0.2, 8.0);
      freq_.push_back(f);
      amp_.push_back(1.0 / (1.0 + f));
      phase_.push_back(rng.range(0.0, kTwoPi));
    }
    // Standardize against the EMMA grid.
    double mean = 0.0;
    for (size_t i = 0; i < emma_len; ++i) mean += raw(double(i) / kEmmaRate);
    mean /= double(emma_len);
    double var = 0.0;
    for (size_t i = 0; i < emma_len; ++i) {
      double d = raw(double(i) / kEmmaRate) - mean;
      var += d * d;
    }
    var /= double(emma_len);
    shift_ = mean;
    scale_ = var > 1e-12 ? 1.0 / std::sqrt(var) : 1.0;
  }

  double operator()(double t) const { return (raw(t) - shift_) * scale_; }

 private:
  double raw(double t) const {
    double v = 0.0;
    for (size_t i = 0; i < freq_.size(); ++i)
      v += amp_[i] * std::sin(kTwoPi * freq_[i] * t + phase_[i]);
    return v;
  }

  std::vector<double> freq_, amp_, phase_;
  double shift_ = 0.0, scale_ = 1.0;
};

void normalize_rms(std::vector<double>& samples, double target) {
  double r = signal::rms(samples);
  if (r <= 0.0) return;
  double g = target / r;
  for (double& s : samples) s *= g;
}

// Resonance gain of a two-formant shape at frequency f.
double formant_gain(double f, double f1, double f2) {
  const double b1 = 220.0, b2 = 320.0;
  double d1 = (f - f1) / b1, d2 = (f - f2) / b2;
  return 1.0 / (1.0 + d1 * d1) + 0.7 / (1.0 + d2 * d2) + 0.05;
}

std::vector<double> synth_clean_audio(const Latent& env, const Latent& pitch,
                                      const Latent& lf1, const Latent& lf2,
                                      size_t n_samples) {
  const double fs = double(signal::kSampleRate);
  const int harmonics = 40;
  std::vector<double> x(n_samples, 0.0);
  double theta = 0.0;
  for (size_t i = 0; i < n_samples; ++i) {
    double t = double(i) / fs;
    double f0 = 120.0 + 25.0 * std::tanh(pitch(t));
    double f1 = 550.0 + 250.0 * std::tanh(lf1(t));
    double f2 = 1600.0 + 600.0 * std::tanh(lf2(t));
    double e = 0.55 + 0.4 * std::tanh(env(t));
    theta += kTwoPi * f0 / fs;
    double acc = 0.0;
    for (int h = 1; h <= harmonics; ++h) {
      double fh = f0 * h;
      if (fh > 7200.0) break;
      acc += formant_gain(fh, f1, f2) / std::sqrt(double(h)) *
             std::sin(double(h) * theta);
    }
    x[i] = e * acc;
  }
  normalize_rms(x, kTargetRms);
  return x;
}

// Smooth independent channel, decorrelated from every latent trajectory on
// the EMMA grid so that coupling=0 tracks carry no audio information.
std::vector<double> independent_channel(Rng& rng, const Matrix& latents,
                                        size_t emma_len) {
  Latent raw(rng, emma_len);
  std::vector<double> v(emma_len);
  double v_mean = 0.0;
  for (size_t i = 0; i < emma_len; ++i) {
    v[i] = raw(double(i) / kEmmaRate);
    v_mean += v[i];
  }
  v_mean /= double(emma_len);
  for (double& s : v) s -= v_mean;

  // Gram-Schmidt against the centered latents.
  for (size_t l = 0; l < latents.rows(); ++l) {
    const double* lat = latents.row(l);
    double lat_mean = 0.0;
    for (size_t i = 0; i < emma_len; ++i) lat_mean += lat[i];
    lat_mean /= double(emma_len);
    double dot = 0.0, sq = 0.0;
    for (size_t i = 0; i < emma_len; ++i) {
      const double c = lat[i] - lat_mean;
      dot += v[i] * c;
      sq += c * c;
    }
    if (sq > 1e-12) {
      const double proj = dot / sq;
      for (size_t i = 0; i < emma_len; ++i) v[i] -= proj * (lat[i] - lat_mean);
    }
  }

  double var = 0.0;
  for (double s : v) var += s * s;
  var /= double(emma_len);
  if (var > 1e-12) {
    double g = 1.0 / std::sqrt(var);
    for (double& s : v) s *= g;
  }
  return v;
}

signal::Waveform synth_noise(Rng& rng, const std::string& kind,
                             size_t n_samples) {
  const double fs = double(signal::kSampleRate);
  std::vector<double> x(n_samples, 0.0);
  if (kind == "white") {
    for (auto& s : x) s = rng.normal();
  } else if (kind == "pink") {
    // One-pole leaky integrator over white noise.
    double state = 0.0;
    for (auto& s : x) {
      state = 0.97 * state + rng.normal();
      s = state;
    }
  } else if (kind == "engine") {
    double base = rng.range(40.0, 70.0);
    double theta = 0.0;
    for (size_t i = 0; i < n_samples; ++i) {
      theta += kTwoPi * base / fs;
      x[i] = std::sin(theta) + 0.6 * std::sin(2.0 * theta) +
             0.4 * std::sin(3.0 * theta) + 0.25 * rng.normal();
    }
  } else {  // "babble": amplitude-modulated band noise
    double state = 0.0;
    double mod_f = rng.range(2.0, 5.0);
    double mod_p = rng.range(0.0, kTwoPi);
    for (size_t i = 0; i < n_samples; ++i) {
      state = 0.9 * state + rng.normal();
      double m = 0.6 + 0.4 * std::sin(kTwoPi * mod_f * double(i) / fs + mod_p);
      x[i] = m * state;
    }
  }
  normalize_rms(x, kTargetRms);
  signal::Waveform w;
  w.samples = std::move(x);
  return w;
}

const char* kNoiseKinds[4] = {"white", "engine", "pink", "babble"};

// Nominal midsagittal sensor rest positions (mm), x then y.
const double kSensorBase[9][2] = {
    {62.0, 8.0},   // UL
    {60.0, -6.0},  // LL
    {58.0, 14.0},  // UJ
    {54.0, -14.0}, // LJ
    {40.0, -2.0},  // T1
    {28.0, 0.0},   // T2
    {16.0, 2.0},   // T3
    {4.0, 2.0},    // T4
    {-12.0, 6.0},  // VM
};

}  // namespace

SynthCorpus synth_corpus(const SynthParams& sp) {
  if (sp.n_utts < 1) throw InvalidInput("synth_corpus: n_utts must be >= 1");
  if (sp.dur_s <= 0.0) throw InvalidInput("synth_corpus: dur_s must be > 0");
  if (sp.coupling < 0.0 || sp.coupling > 1.0)
    throw InvalidInput("synth_corpus: coupling must lie in [0, 1]");
  if (sp.n_speakers < 1)
    throw InvalidInput("synth_corpus: n_speakers must be >= 1");

  const size_t emma_len = std::max<size_t>(2, size_t(std::lround(sp.dur_s * kEmmaRate)));
  const size_t n_samples = emma_len * 64;  // exact duration match by construction

  SynthCorpus out;
  out.items.reserve(sp.n_utts);

  for (size_t u = 0; u < sp.n_utts; ++u) {
    const int speaker = int(u % size_t(sp.n_speakers));
    char utt_id[64], spk_id[16];
    std::snprintf(spk_id, sizeof(spk_id), "spk%d", speaker);
    std::snprintf(utt_id, sizeof(utt_id), "%s_utt%04zu", spk_id, u);

    // Audio stream: independent of coupling and of the track stream.
    Rng audio_rng(derive_seed(sp.seed, std::string("utt|") + utt_id));
    Latent env(audio_rng, emma_len);
    Latent pitch(audio_rng, emma_len);
    Latent lf1(audio_rng, emma_len);
    Latent lf2(audio_rng, emma_len);
    const Latent* latents[4] = {&env, &pitch, &lf1, &lf2};

    CorpusItem item;
    item.speaker_id = spk_id;
    item.utterance_id = utt_id;
    item.clean.rate = signal::kSampleRate;
    item.clean.samples = synth_clean_audio(env, pitch, lf1, lf2, n_samples);

    Matrix latent_samples(4, emma_len);
    for (size_t l = 0; l < 4; ++l)
      for (size_t i = 0; i < emma_len; ++i)
        latent_samples.at(l, i) = (*latents[l])(double(i) / kEmmaRate);

    Rng track_rng(derive_seed(sp.seed, std::string("trk|") + utt_id));
    item.track.rate = kEmmaRate;
    item.track.sensors = sensor_canon();
    item.track.channels = Matrix(18, emma_len);
    // Per-speaker anatomical offset keeps the z-score statistics honest.
    Rng spk_rng(derive_seed(sp.seed, std::string("spk|") + spk_id));
    double spk_dx = spk_rng.range(-4.0, 4.0), spk_dy = spk_rng.range(-3.0, 3.0);

    for (size_t c = 0; c < 18; ++c) {
      const size_t sensor = c / 2;
      const double base = kSensorBase[sensor][c % 2] + (c % 2 ? spk_dy : spk_dx);
      const double amp = track_rng.range(2.0, 7.0);
      const double* lat = latent_samples.row(c % 4);
      std::vector<double> indep =
          independent_channel(track_rng, latent_samples, emma_len);
      double* row = item.track.channels.row(c);
      for (size_t i = 0; i < emma_len; ++i) {
        double drive = sp.coupling * lat[i] + (1.0 - sp.coupling) * indep[i];
        row[i] = base + amp * drive;
      }
    }
    out.items.push_back(std::move(item));
    out.item_latents.push_back(std::move(latent_samples));
  }

  const size_t noise_len =
      std::max<size_t>(size_t(signal::kSampleRate / 4),
                       size_t(std::lround(sp.noise_dur_s * signal::kSampleRate)));
  for (int i = 0; i < sp.n_train_noises + sp.n_test_noises; ++i) {
    const bool test = i >= sp.n_train_noises;
    const char* kind = kNoiseKinds[size_t(i) % 4];
    char id[48];
    std::snprintf(id, sizeof(id), "%s%02d_%s", test ? "nte" : "ntr",
                  test ? i - sp.n_train_noises : i, kind);
    Rng nrng(derive_seed(sp.seed, std::string("noise|") + id));
    NoiseClip clip;
    clip.id = id;
    clip.test_split = test;
    clip.wave = synth_noise(nrng, kind, noise_len);
    out.noises.push_back(std::move(clip));
  }
  return out;
}

}  // namespace aamse::corpus
