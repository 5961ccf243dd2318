// core/include/aamse/signal/stft.h

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AAMSE_SIGNAL_STFT_H_
#define AAMSE_SIGNAL_STFT_H_

#include <cstddef>
#include <string>
#include <vector>

#include "aamse/matrix.h"
#include "aamse/signal/wave.h"

namespace aamse::signal {

// Analysis parameters. Defaults: 512-sample periodic Hann at 75% overlap,
// FFT length equal to the window, center (reflect) padding.
struct StftParams {
  int window_len = 512;
  int hop = 128;
  int fft_len = 512;
  std::string window = "hann";

  int bin_count() const { return fft_len / 2 + 1; }
};

// Throws InvalidInput if the parameter set is unusable (hop must divide
// window_len, fft_len must be a power of two >= window_len).
void validate(const StftParams& p);

// log1p-compressed magnitude plus raw phase, one row per frame.
struct Spectrogram {
  Matrix log_mag;   // F x bin_count, entries >= 0
  Matrix phase;     // F x bin_count, radians in (-pi, pi]
  StftParams params;
  size_t source_len = 0;  // samples in the analyzed waveform

  size_t frames() const { return log_mag.rows(); }
};

// Frame count for a source of `len` samples under center padding.
size_t frame_count(size_t len, const StftParams& p);

// Periodic Hann of length n (the only window identifier accepted here).
std::vector<double> make_window(const std::string& kind, int n);

// Center-padded analysis: reflect pad by window_len/2 on both ends, frame,
// window, FFT; magnitude is stored log1p-compressed, phase as raw arg.
Spectrogram stft(const Waveform& w, const StftParams& p = StftParams{});

// Weighted overlap-add inverse with per-sample window-power normalization.
// Output is truncated/padded to sp.source_len. Throws ReconstructionError
// if the window/hop combination leaves a source sample with no coverage.
Waveform istft(const Spectrogram& sp);

// Elementwise log1p / expm1 pair. compress rejects negative magnitudes;
// decompress rejects negative inputs and clamps rounding residue at 0.
Matrix compress(const Matrix& mag);
Matrix decompress(const Matrix& c);

}  // namespace aamse::signal

#endif  // AAMSE_SIGNAL_STFT_H_
