// core/include/aamse/metrics/edit.h

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AAMSE_METRICS_EDIT_H_
#define AAMSE_METRICS_EDIT_H_

#include <cstddef>
#include <string_view>

namespace aamse::metrics {

// Minimal insert/delete/substitute edit count, dynamic programming over
// byte symbols.
size_t levenshtein(std::string_view a, std::string_view b);

// Character correct rate: max(0, 1 - levenshtein(ref, hyp) / |ref|).
// Empty reference is an InvalidInput.
double ccr(std::string_view ref, std::string_view hyp);

}  // namespace aamse::metrics

#endif  // AAMSE_METRICS_EDIT_H_
