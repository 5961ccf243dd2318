// core/include/aamse/corpus/mix.h

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AAMSE_CORPUS_MIX_H_
#define AAMSE_CORPUS_MIX_H_

#include <cstdint>

#include "aamse/signal/wave.h"

namespace aamse::corpus {

// s = x + alpha * n', where n' is a seed-deterministic random crop of the
// noise (looped without crossfade when shorter than the clean signal) and
// alpha = (rms(x) / rms(n')) * 10^(-snr_db / 20). The re-measured SNR of
// the result equals snr_db to within floating-point error.
signal::Waveform mix_at_snr(const signal::Waveform& clean,
                            const signal::Waveform& noise, double snr_db,
                            uint64_t seed);

}  // namespace aamse::corpus

#endif  // AAMSE_CORPUS_MIX_H_
