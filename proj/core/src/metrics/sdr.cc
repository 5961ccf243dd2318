// core/src/metrics/sdr.cc

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "aamse/metrics/sdr.h"

#include <cmath>
#include <limits>

namespace aamse::metrics {

namespace {
constexpr double kSdrCap = 60.0;
}

double si_sdr(const signal::Waveform& ref, const signal::Waveform& est) {
  signal::validate(ref, "si_sdr(ref)");
  signal::validate(est, "si_sdr(est)");
  if (ref.size() != est.size())
    throw InvalidInput("si_sdr: length mismatch");

  double dot = 0.0, ref_sq = 0.0;
  for (size_t i = 0; i < ref.size(); ++i) {
    dot += est.samples[i] * ref.samples[i];
    ref_sq += ref.samples[i] * ref.samples[i];
  }
  if (ref_sq <= 0.0) throw InvalidInput("si_sdr: silent reference");

  const double scale = dot / ref_sq;
  double target_sq = 0.0, err_sq = 0.0;
  for (size_t i = 0; i < ref.size(); ++i) {
    const double s = scale * ref.samples[i];
    const double e = est.samples[i] - s;
    target_sq += s * s;
    err_sq += e * e;
  }
  if (target_sq <= 0.0) return -kSdrCap;
  if (err_sq <= target_sq * 1e-12) return kSdrCap;
  const double v = 10.0 * std::log10(target_sq / err_sq);
  return std::min(kSdrCap, std::max(-kSdrCap, v));
}

double snr_db(const signal::Waveform& ref, const signal::Waveform& noise_part) {
  signal::validate(ref, "snr_db(ref)");
  if (ref.size() != noise_part.size())
    throw InvalidInput("snr_db: length mismatch");
  double ref_sq = 0.0, noise_sq = 0.0;
  for (size_t i = 0; i < ref.size(); ++i) {
    ref_sq += ref.samples[i] * ref.samples[i];
    noise_sq += noise_part.samples[i] * noise_part.samples[i];
  }
  if (ref_sq <= 0.0) throw InvalidInput("snr_db: silent reference");
  if (noise_sq <= 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(ref_sq / noise_sq);
}

}  // namespace aamse::metrics
