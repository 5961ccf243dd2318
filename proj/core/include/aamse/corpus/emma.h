// core/include/aamse/corpus/emma.h

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AAMSE_CORPUS_EMMA_H_
#define AAMSE_CORPUS_EMMA_H_

#include <string>
#include <vector>

#include "aamse/matrix.h"
#include "aamse/signal/stft.h"

namespace aamse::corpus {

inline constexpr int kEmmaRate = 250;

// Canonical sensor order. Each sensor contributes an (x, y) channel pair,
// so the full set is 18 channels.
const std::vector<std::string>& sensor_canon();

// Resolves a label to its canonical index; throws InvalidInput listing the
// valid labels if the label is unknown.
size_t sensor_index(const std::string& label);

// Articulator trajectories: one (x, y) channel pair per sensor, sampled at
// 250 Hz, values in millimeters.
struct ArticulatoryTrack {
  Matrix channels;                   // (2 * sensors) x N
  int rate = kEmmaRate;
  std::vector<std::string> sensors;  // ordered labels, channel pairs follow

  size_t length() const { return channels.cols(); }
  size_t channel_count() const { return channels.rows(); }
};

// Throws InvalidInput on label/shape inconsistencies or non-finite values.
void validate(const ArticulatoryTrack& t, const char* what);

// Keeps the requested sensors, in canonical order, dropping the rest.
// `keep` must be a non-empty subset of the track's sensors.
ArticulatoryTrack select_sensors(const ArticulatoryTrack& t,
                                 const std::vector<std::string>& keep);

// Linear interpolation of every channel from 250 Hz to 16 kHz (factor 64).
// Output has round(N * 64) columns; knot values are preserved exactly and
// the final fractional tail is linearly extrapolated from the last segment.
Matrix align_to_waveform(const ArticulatoryTrack& t);

// Resamples every channel at the STFT frame-center instants of a paired
// waveform. When target_samples is 0 the track's own duration (N * 64
// samples) defines the frame grid; otherwise the paired waveform length is
// used and a duration mismatch beyond one EMMA sample period throws
// AlignmentError.
Matrix align_to_frames(const ArticulatoryTrack& t, const signal::StftParams& p,
                       size_t target_samples = 0);

// Track container: one text header line
//   EMMA v1 rate=250 sensors=UL,LL,...
// followed by binary little-endian float32 frames, all channels per step.
ArticulatoryTrack read_track(const std::string& path);
void write_track(const std::string& path, const ArticulatoryTrack& t);

}  // namespace aamse::corpus

#endif  // AAMSE_CORPUS_EMMA_H_
