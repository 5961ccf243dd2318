// core/src/metrics/stoi.cc

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "aamse/metrics/stoi.h"

#include <cmath>
#include <complex>
#include <vector>

#include "aamse/matrix.h"
#include "aamse/signal/fft.h"

namespace aamse::metrics {

namespace {

constexpr double kEps = 1e-12;
constexpr double kPi = 3.14159265358979323846264338327950288;

// Symmetric Hann without the zero endpoints (hanning(n+2) minus its ends).
std::vector<double> hanning_open(int n) {
  std::vector<double> w(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    w[size_t(i)] =
        0.5 - 0.5 * std::cos(2.0 * kPi * double(i + 1) / double(n + 1));
  return w;
}

// Drops frames whose clean-signal energy sits more than dyn_range below
// the loudest frame, then overlap-adds the survivors back into compact
// signals. Both signals share the clean mask.
void remove_silent_frames(const std::vector<double>& x,
                          const std::vector<double>& y, const StoiParams& p,
                          std::vector<double>* x_out,
                          std::vector<double>* y_out) {
  const size_t N = size_t(p.frame_len), H = size_t(p.hop);
  const std::vector<double> w = hanning_open(p.frame_len);

  std::vector<size_t> starts;
  for (size_t s = 0; s + N <= x.size(); s += H) starts.push_back(s);
  if (starts.empty()) throw InvalidInput("stoi: signal shorter than a frame");

  std::vector<double> energy_db(starts.size());
  double max_db = -1e300;
  for (size_t m = 0; m < starts.size(); ++m) {
    double sq = 0.0;
    for (size_t i = 0; i < N; ++i) {
      const double v = w[i] * x[starts[m] + i];
      sq += v * v;
    }
    energy_db[m] = 20.0 * std::log10(std::sqrt(sq) + kEps);
    max_db = std::max(max_db, energy_db[m]);
  }

  std::vector<size_t> kept;
  for (size_t m = 0; m < starts.size(); ++m)
    if (energy_db[m] > max_db - p.dyn_range_db) kept.push_back(m);
  if (kept.empty()) throw InvalidInput("stoi: all frames below threshold");

  const size_t out_len = (kept.size() - 1) * H + N;
  x_out->assign(out_len, 0.0);
  y_out->assign(out_len, 0.0);
  for (size_t k = 0; k < kept.size(); ++k) {
    const size_t src = starts[kept[k]], dst = k * H;
    for (size_t i = 0; i < N; ++i) {
      (*x_out)[dst + i] += w[i] * x[src + i];
      (*y_out)[dst + i] += w[i] * y[src + i];
    }
  }
}

// One-third-octave band envelope matrix: bands x frames.
Matrix band_envelopes(const std::vector<double>& sig, const StoiParams& p,
                      const std::vector<std::pair<int, int>>& band_bins) {
  const size_t N = size_t(p.frame_len), H = size_t(p.hop);
  const std::vector<double> w = hanning_open(p.frame_len);

  std::vector<size_t> starts;
  for (size_t s = 0; s + N <= sig.size(); s += H) starts.push_back(s);

  Matrix env(size_t(p.bands), starts.size());
  std::vector<std::complex<double>> buf(size_t(p.fft_len));
  for (size_t m = 0; m < starts.size(); ++m) {
    for (size_t i = 0; i < N; ++i) buf[i] = sig[starts[m] + i] * w[i];
    for (size_t i = N; i < size_t(p.fft_len); ++i) buf[i] = 0.0;
    signal::fft_inplace(buf, false);
    for (int j = 0; j < p.bands; ++j) {
      double sq = 0.0;
      for (int k = band_bins[size_t(j)].first; k < band_bins[size_t(j)].second;
           ++k)
        sq += std::norm(buf[size_t(k)]);
      env.at(size_t(j), m) = std::sqrt(sq);
    }
  }
  return env;
}

// Nearest-bin band edges for center frequencies min_center * 2^(j/3).
std::vector<std::pair<int, int>> third_octave_bins(const StoiParams& p) {
  const int half = p.fft_len / 2 + 1;
  const double df = double(signal::kSampleRate) / double(p.fft_len);
  auto nearest_bin = [&](double f) {
    int best = 0;
    double best_d = 1e300;
    for (int k = 0; k < half; ++k) {
      const double d = std::fabs(double(k) * df - f);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    return best;
  };
  std::vector<std::pair<int, int>> bins;
  for (int j = 0; j < p.bands; ++j) {
    const double cf = p.min_center_hz * std::pow(2.0, double(j) / 3.0);
    bins.emplace_back(nearest_bin(cf * std::pow(2.0, -1.0 / 6.0)),
                      nearest_bin(cf * std::pow(2.0, 1.0 / 6.0)));
  }
  return bins;
}

}  // namespace

double stoi(const signal::Waveform& clean, const signal::Waveform& processed,
            const StoiParams& p) {
  signal::validate(clean, "stoi(clean)");
  signal::validate(processed, "stoi(processed)");
  if (clean.size() != processed.size())
    throw InvalidInput("stoi: length mismatch");
  if (clean.rate != signal::kSampleRate ||
      processed.rate != signal::kSampleRate)
    throw InvalidInput("stoi: inputs must be 16 kHz");
  if (clean.duration() < 0.5)
    throw InvalidInput("stoi: need at least 0.5 s of audio");

  const StoiParams canon;
  if (p.frame_len != canon.frame_len || p.hop != canon.hop ||
      p.fft_len != canon.fft_len || p.bands != canon.bands ||
      p.min_center_hz != canon.min_center_hz ||
      p.segment_frames != canon.segment_frames ||
      p.dyn_range_db != canon.dyn_range_db || p.beta_db != canon.beta_db) {
    log::warn() << "stoi: non-canonical parameter override in effect";
  }

  std::vector<double> x_sil, y_sil;
  remove_silent_frames(clean.samples, processed.samples, p, &x_sil, &y_sil);

  const auto band_bins = third_octave_bins(p);
  const Matrix X = band_envelopes(x_sil, p, band_bins);
  const Matrix Y = band_envelopes(y_sil, p, band_bins);
  const size_t frames = X.cols();
  const size_t seg = size_t(p.segment_frames);
  if (frames < seg)
    throw InvalidInput("stoi: fewer than " + std::to_string(seg) +
                       " frames after silent-frame removal");

  const double clip = 1.0 + std::pow(10.0, -p.beta_db / 20.0);
  double acc = 0.0;
  size_t cells = 0;
  std::vector<double> xs(seg), ys(seg);
  for (size_t m = seg - 1; m < frames; ++m) {
    for (int j = 0; j < p.bands; ++j) {
      double xn = 0.0, yn = 0.0;
      for (size_t i = 0; i < seg; ++i) {
        xs[i] = X.at(size_t(j), m + 1 - seg + i);
        ys[i] = Y.at(size_t(j), m + 1 - seg + i);
        xn += xs[i] * xs[i];
        yn += ys[i] * ys[i];
      }
      // Scale the degraded segment to the clean energy, clip, correlate.
      const double alpha = std::sqrt(xn) / (std::sqrt(yn) + kEps);
      double x_mean = 0.0, y_mean = 0.0;
      for (size_t i = 0; i < seg; ++i) {
        ys[i] = std::min(alpha * ys[i], xs[i] * clip);
        x_mean += xs[i];
        y_mean += ys[i];
      }
      x_mean /= double(seg);
      y_mean /= double(seg);
      double dot = 0.0, xv = 0.0, yv = 0.0;
      for (size_t i = 0; i < seg; ++i) {
        const double a = xs[i] - x_mean;
        const double b = ys[i] - y_mean;
        dot += a * b;
        xv += a * a;
        yv += b * b;
      }
      acc += dot / (std::sqrt(xv) * std::sqrt(yv) + kEps);
      ++cells;
    }
  }
  return acc / double(cells);
}

}  // namespace aamse::metrics
