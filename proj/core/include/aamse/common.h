// core/include/aamse/common.h

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef AAMSE_COMMON_H_
#define AAMSE_COMMON_H_

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace aamse {

inline constexpr const char* kToolName = "aamse";
inline constexpr const char* kToolVersion = "0.1.0";

// Error taxonomy. Every throwing path in the library uses one of these so
// callers (and the CLI exit-code mapping) can tell argument problems from
// runtime failures.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& msg) : Error(msg) {}
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& msg) : Error(msg) {}
};

class ReconstructionError : public Error {
 public:
  explicit ReconstructionError(const std::string& msg) : Error(msg) {}
};

class AlignmentError : public Error {
 public:
  explicit AlignmentError(const std::string& msg) : Error(msg) {}
};

class SpecError : public Error {
 public:
  explicit SpecError(const std::string& msg) : Error(msg) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

// FNV-1a, used for seed derivation and config hashing. Stable across
// platforms; not cryptographic.
inline uint64_t fnv1a64(std::string_view s, uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Derives a child seed from a base seed plus a textual tag, e.g.
// derive_seed(plan_seed, "utt0003|noise_eng1|-5"). Deterministic and
// order-independent across workers.
inline uint64_t derive_seed(uint64_t base, std::string_view tag) {
  char buf[16];
  for (int i = 0; i < 8; ++i) buf[i] = char((base >> (8 * i)) & 0xff);
  uint64_t h = fnv1a64(std::string_view(buf, 8));
  return fnv1a64(tag, h);
}

// Deterministic RNG. std::mt19937_64 has a standardized sequence; the
// distributions below are hand-rolled because std:: distributions are
// implementation-defined and would break bit-reproducibility across
// toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double unit() { return double(gen_() >> 11) * 0x1.0p-53; }

  double range(double lo, double hi) { return lo + (hi - lo) * unit(); }

  // Uniform integer in [0, n). n must be > 0.
  uint64_t below(uint64_t n) {
    // Multiply-shift; bias is ~n/2^64, irrelevant at our scales.
    return uint64_t((__uint128_t(gen_()) * n) >> 64);
  }

  // Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = unit(), u2 = unit();
    while (u1 <= 1e-300) u1 = unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = size_t(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

namespace log {

enum class Level { kDebug = 0, kInfo = 1, kWarn = 2, kError = 3, kOff = 4 };

// Threshold comes from AAMSE_LOG (debug|info|warn|error|off); default info.
Level threshold();

// One log line, flushed to stderr on destruction.
class Line {
 public:
  explicit Line(Level level);
  ~Line();
  template <typename T>
  Line& operator<<(const T& v) {
    if (enabled_) os_ << v;
    return *this;
  }

 private:
  bool enabled_;
  Level level_;
  std::ostringstream os_;
};

inline Line debug() { return Line(Level::kDebug); }
inline Line info() { return Line(Level::kInfo); }
inline Line warn() { return Line(Level::kWarn); }
inline Line error() { return Line(Level::kError); }

}  // namespace log

}  // namespace aamse

#endif  // AAMSE_COMMON_H_
