// core/include/aamse/corpus/synth.h

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AAMSE_CORPUS_SYNTH_H_
#define AAMSE_CORPUS_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "aamse/corpus/emma.h"
#include "aamse/signal/wave.h"

namespace aamse::corpus {

// One paired utterance. `noisy`/`noise_id`/`snr_db` stay empty until a
// manifest row is materialized.
struct CorpusItem {
  signal::Waveform clean;
  signal::Waveform noisy;
  std::string noise_id;
  double snr_db = 0.0;
  ArticulatoryTrack track;
  std::string speaker_id;
  std::string utterance_id;
};

struct NoiseClip {
  std::string id;
  signal::Waveform wave;
  bool test_split = false;
};

struct SynthCorpus {
  std::vector<CorpusItem> items;
  std::vector<NoiseClip> noises;
  // Generator diagnostics: the four latent trajectories (envelope, pitch,
  // two formants) per item, sampled on the 250 Hz grid. Channel c of a
  // track is driven by latent (c mod 4).
  std::vector<Matrix> item_latents;
};

// Generator knobs beyond the required four. Audio depends only on
// (seed, n_utts, dur_s, speakers); `coupling` shapes the tracks alone.
struct SynthParams {
  size_t n_utts = 1;
  double dur_s = 2.0;
  double coupling = 1.0;  // in [0, 1]
  uint64_t seed = 0;
  int n_speakers = 1;
  int n_train_noises = 8;
  int n_test_noises = 7;
  double noise_dur_s = 4.0;
};

// Clean "speech-like" audio (amplitude-modulated harmonic stacks under
// slowly varying formant-like resonances) paired with articulator tracks.
// At coupling=1 every channel is an affine image of one of the latent
// trajectories that drive the audio; at coupling=0 the channels are
// independent smooth noise, decorrelated from the amplitude envelope.
// Fully deterministic per seed.
SynthCorpus synth_corpus(const SynthParams& sp);

inline SynthCorpus synth_corpus(size_t n_utts, double dur_s, double coupling,
                                uint64_t seed) {
  SynthParams sp;
  sp.n_utts = n_utts;
  sp.dur_s = dur_s;
  sp.coupling = coupling;
  sp.seed = seed;
  return synth_corpus(sp);
}

}  // namespace aamse::corpus

#endif  // AAMSE_CORPUS_SYNTH_H_
