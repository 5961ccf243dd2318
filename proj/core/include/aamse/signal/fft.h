// core/include/aamse/signal/fft.h

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AAMSE_SIGNAL_FFT_H_
#define AAMSE_SIGNAL_FFT_H_

#include <complex>
#include <vector>

namespace aamse::signal {

// In-place iterative radix-2 FFT. Size must be a power of two.
// inverse=true applies the conjugate transform and the 1/N scale.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse);

bool is_power_of_two(size_t n);

}  // namespace aamse::signal

#endif  // AAMSE_SIGNAL_FFT_H_
