// core/include/aamse/signal/wave.h

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AAMSE_SIGNAL_WAVE_H_
#define AAMSE_SIGNAL_WAVE_H_

#include <string>
#include <vector>

#include "aamse/common.h"

namespace aamse::signal {

inline constexpr int kSampleRate = 16000;

// Mono waveform, nominal amplitude range [-1, 1]. All processing is done
// in doubles; disk I/O quantizes to 16-bit PCM.
struct Waveform {
  std::vector<double> samples;
  int rate = kSampleRate;

  size_t size() const { return samples.size(); }
  double duration() const { return double(samples.size()) / rate; }
};

// Throws InvalidInput if the waveform is empty or carries NaN/Inf.
void validate(const Waveform& w, const char* what);

double rms(const std::vector<double>& samples);
double peak(const std::vector<double>& samples);

// RIFF PCM reader/writer: 16-bit little-endian, mono, 16 kHz. Anything
// else is rejected with a diagnostic naming the offending field.
Waveform read_wav(const std::string& path);
void write_wav(const std::string& path, const Waveform& w);

}  // namespace aamse::signal

#endif  // AAMSE_SIGNAL_WAVE_H_
