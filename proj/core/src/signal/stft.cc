// core/src/signal/stft.cc

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "aamse/signal/stft.h"

#include <cmath>
#include <complex>

#include "aamse/signal/fft.h"

namespace aamse::signal {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Reflect index (no edge repeat), bouncing for arbitrarily short signals.
size_t reflect_index(long long i, size_t len) {
  if (len == 1) return 0;
  long long period = 2 * (static_cast<long long>(len) - 1);
  long long m = i % period;
  if (m < 0) m += period;
  if (m >= static_cast<long long>(len)) m = period - m;
  return size_t(m);
}

}  // namespace

void validate(const StftParams& p) {
  if (p.window_len <= 0 || p.hop <= 0)
    throw InvalidInput("stft params: window_len and hop must be > 0");
  if (p.window_len % p.hop != 0)
    throw InvalidInput("stft params: hop must divide window_len (got " +
                       std::to_string(p.window_len) + "/" +
                       std::to_string(p.hop) + ")");
  if (p.fft_len < p.window_len)
    throw InvalidInput("stft params: fft_len must be >= window_len");
  if (!is_power_of_two(size_t(p.fft_len)))
    throw InvalidInput("stft params: fft_len must be a power of two");
  if (p.window != "hann")
    throw InvalidInput("stft params: unknown window '" + p.window + "'");
}

std::vector<double> make_window(const std::string& kind, int n) {
  if (kind != "hann")
    throw InvalidInput("make_window: unknown window '" + kind + "'");
  std::vector<double> w(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    w[size_t(i)] = 0.5 - 0.5 * std::cos(2.0 * kPi * double(i) / double(n));
  return w;
}

size_t frame_count(size_t len, const StftParams& p) {
  size_t padded = len + size_t(p.window_len);  // window_len/2 on each side
  return (padded - size_t(p.window_len)) / size_t(p.hop) + 1;
}

Spectrogram stft(const Waveform& w, const StftParams& p) {
  validate(w, "stft");
  validate(p);
  if (w.rate != kSampleRate)
    throw InvalidInput("stft: expected " + std::to_string(kSampleRate) +
                       " Hz input, got " + std::to_string(w.rate));

  const size_t len = w.samples.size();
  const int pad = p.window_len / 2;
  const size_t frames = frame_count(len, p);
  const int bins = p.bin_count();
  const std::vector<double> window = make_window(p.window, p.window_len);

  Spectrogram sp;
  sp.params = p;
  sp.source_len = len;
  sp.log_mag = Matrix(frames, size_t(bins));
  sp.phase = Matrix(frames, size_t(bins));

  std::vector<std::complex<double>> buf(size_t(p.fft_len));
  for (size_t m = 0; m < frames; ++m) {
    long long start = static_cast<long long>(m) * p.hop - pad;
    for (int i = 0; i < p.window_len; ++i) {
      long long src = start + i;
      double s = (src >= 0 && src < static_cast<long long>(len))
                     ? w.samples[size_t(src)]
                     : w.samples[reflect_index(src, len)];
      buf[size_t(i)] = s * window[size_t(i)];
    }
    for (int i = p.window_len; i < p.fft_len; ++i) buf[size_t(i)] = 0.0;
    fft_inplace(buf, false);

    double* lm = sp.log_mag.row(m);
    double* ph = sp.phase.row(m);
    for (int k = 0; k < bins; ++k) {
      double re = buf[size_t(k)].real(), im = buf[size_t(k)].imag();
      lm[k] = std::log1p(std::hypot(re, im));
      double ang = std::atan2(im, re);
      if (ang <= -kPi) ang += 2.0 * kPi;  // keep phase in (-pi, pi]
      ph[k] = ang;
    }
  }
  return sp;
}

Waveform istft(const Spectrogram& sp) {
  const StftParams& p = sp.params;
  validate(p);
  const size_t frames = sp.frames();
  const int bins = p.bin_count();
  if (sp.phase.rows() != frames || sp.phase.cols() != size_t(bins) ||
      sp.log_mag.cols() != size_t(bins))
    throw ShapeError("istft: log_mag/phase shape mismatch");

  const int pad = p.window_len / 2;
  const std::vector<double> window = make_window(p.window, p.window_len);
  const size_t padded_len =
      frames == 0 ? 0 : size_t(frames - 1) * size_t(p.hop) + size_t(p.window_len);

  std::vector<double> acc(padded_len, 0.0);
  std::vector<double> den(padded_len, 0.0);
  std::vector<std::complex<double>> buf(size_t(p.fft_len));

  for (size_t m = 0; m < frames; ++m) {
    const double* lm = sp.log_mag.row(m);
    const double* ph = sp.phase.row(m);
    for (int k = 0; k < bins; ++k) {
      double mag = std::expm1(lm[k]);
      if (mag < 0.0) mag = 0.0;
      buf[size_t(k)] = std::polar(mag, ph[k]);
    }
    // Hermitian extension of the half spectrum.
    for (int k = bins; k < p.fft_len; ++k)
      buf[size_t(k)] = std::conj(buf[size_t(p.fft_len - k)]);
    fft_inplace(buf, true);

    size_t base = m * size_t(p.hop);
    for (int i = 0; i < p.window_len; ++i) {
      acc[base + size_t(i)] += window[size_t(i)] * buf[size_t(i)].real();
      den[base + size_t(i)] += window[size_t(i)] * window[size_t(i)];
    }
  }

  Waveform out;
  out.rate = kSampleRate;
  out.samples.assign(sp.source_len, 0.0);
  for (size_t i = 0; i < sp.source_len; ++i) {
    size_t j = i + size_t(pad);
    if (j >= padded_len) break;  // spectrogram shorter than source: zero-pad
    if (den[j] < 1e-10)
      throw ReconstructionError(
          "istft: window/hop leaves sample " + std::to_string(i) +
          " without overlap-add coverage (non-COLA configuration)");
    out.samples[i] = acc[j] / den[j];
  }
  return out;
}

Matrix compress(const Matrix& mag) {
  Matrix out(mag.rows(), mag.cols());
  for (size_t r = 0; r < mag.rows(); ++r) {
    const double* src = mag.row(r);
    double* dst = out.row(r);
    for (size_t c = 0; c < mag.cols(); ++c) {
      if (!(src[c] >= 0.0))
        throw InvalidInput("compress: negative or non-finite magnitude");
      dst[c] = std::log1p(src[c]);
    }
  }
  return out;
}

Matrix decompress(const Matrix& c) {
  Matrix out(c.rows(), c.cols());
  for (size_t r = 0; r < c.rows(); ++r) {
    const double* src = c.row(r);
    double* dst = out.row(r);
    for (size_t k = 0; k < c.cols(); ++k) {
      if (!(src[k] >= 0.0))
        throw InvalidInput("decompress: negative or non-finite input");
      double v = std::expm1(src[k]);
      dst[k] = v < 0.0 ? 0.0 : v;
    }
  }
  return out;
}

}  // namespace aamse::signal
