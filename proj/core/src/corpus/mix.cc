// core/src/corpus/mix.cc

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "aamse/corpus/mix.h"

#include <cmath>

namespace aamse::corpus {

signal::Waveform mix_at_snr(const signal::Waveform& clean,
                            const signal::Waveform& noise, double snr_db,
                            uint64_t seed) {
  signal::validate(clean, "mix_at_snr(clean)");
  signal::validate(noise, "mix_at_snr(noise)");
  if (clean.rate != noise.rate)
    throw InvalidInput("mix_at_snr: sample-rate mismatch");
  const double clean_rms = signal::rms(clean.samples);
  if (clean_rms <= 0.0)
    throw InvalidInput("mix_at_snr: silent clean signal, SNR undefined");

  // Seed-deterministic crop, looped when the noise is too short.
  Rng rng(seed);
  const size_t n = clean.samples.size();
  const size_t start = size_t(rng.below(noise.samples.size()));
  std::vector<double> crop(n);
  for (size_t i = 0; i < n; ++i)
    crop[i] = noise.samples[(start + i) % noise.samples.size()];

  const double crop_rms = signal::rms(crop);
  if (crop_rms <= 0.0)
    throw InvalidInput("mix_at_snr: silent noise crop, SNR undefined");

  const double alpha = (clean_rms / crop_rms) * std::pow(10.0, -snr_db / 20.0);
  signal::Waveform out;
  out.rate = clean.rate;
  out.samples.resize(n);
  for (size_t i = 0; i < n; ++i)
    out.samples[i] = clean.samples[i] + alpha * crop[i];
  return out;
}

}  // namespace aamse::corpus
