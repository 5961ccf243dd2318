// core/src/metrics/edit.cc

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "aamse/metrics/edit.h"

#include <algorithm>
#include <vector>

#include "aamse/common.h"

namespace aamse::metrics {

size_t levenshtein(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);  // keep the rolling row short
  const size_t m = a.size(), n = b.size();
  if (n == 0) return m;

  std::vector<size_t> row(n + 1);
  for (size_t j = 0; j <= n; ++j) row[j] = j;
  for (size_t i = 1; i <= m; ++i) {
    size_t diag = row[0];
    row[0] = i;
    for (size_t j = 1; j <= n; ++j) {
      const size_t subst = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      diag = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, subst});
    }
  }
  return row[n];
}

double ccr(std::string_view ref, std::string_view hyp) {
  if (ref.empty()) throw InvalidInput("ccr: empty reference transcript");
  const double rate =
      1.0 - double(levenshtein(ref, hyp)) / double(ref.size());
  return rate < 0.0 ? 0.0 : rate;
}

}  // namespace aamse::metrics
