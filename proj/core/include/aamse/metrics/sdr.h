// core/include/aamse/metrics/sdr.h

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AAMSE_METRICS_SDR_H_
#define AAMSE_METRICS_SDR_H_

#include "aamse/signal/wave.h"

namespace aamse::metrics {

// Scale-invariant signal-to-distortion ratio, clamped to [-60, 60] dB so a
// perfect (or inverted-scale) estimate stays finite.
double si_sdr(const signal::Waveform& ref, const signal::Waveform& est);

// 10*log10(|ref|^2 / |noise|^2); +inf when the noise part is silent.
double snr_db(const signal::Waveform& ref, const signal::Waveform& noise_part);

}  // namespace aamse::metrics

#endif  // AAMSE_METRICS_SDR_H_
