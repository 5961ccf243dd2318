// core/include/aamse/metrics/stoi.h

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AAMSE_METRICS_STOI_H_
#define AAMSE_METRICS_STOI_H_

#include "aamse/signal/wave.h"

namespace aamse::metrics {

// Canonical constants of the short-time objective intelligibility measure
// on a native 16 kHz path. Overriding any of these deviates from the
// published measure; stoi() logs a warning when it sees non-defaults.
struct StoiParams {
  int frame_len = 256;        // TF frames at 50% overlap
  int hop = 128;
  int fft_len = 512;
  int bands = 15;             // one-third-octave bands
  double min_center_hz = 150.0;
  int segment_frames = 48;    // 384 ms at 8 ms per hop
  double dyn_range_db = 40.0; // silent-frame removal threshold
  double beta_db = -15.0;     // lower SDR clip bound
};

// Clipped normalized correlation of one-third-octave temporal envelopes,
// averaged over bands and 384 ms segments, after removing frames more
// than 40 dB below the loudest clean frame. Inputs must be equal-length
// 16 kHz waveforms of at least 0.5 s.
double stoi(const signal::Waveform& clean, const signal::Waveform& processed,
            const StoiParams& p = StoiParams{});

}  // namespace aamse::metrics

#endif  // AAMSE_METRICS_STOI_H_
