// core/src/common.cc

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "aamse/common.h"

#include <cstdlib>
#include <cstring>
#include <ctime>
#include <iostream>
#include <mutex>

namespace aamse::log {

namespace {

Level parse_level() {
  const char* env = std::getenv("AAMSE_LOG");
  if (env == nullptr) return Level::kInfo;
  if (std::strcmp(env, "debug") == 0) return Level::kDebug;
  if (std::strcmp(env, "info") == 0) return Level::kInfo;
  if (std::strcmp(env, "warn") == 0) return Level::kWarn;
  if (std::strcmp(env, "error") == 0) return Level::kError;
  if (std::strcmp(env, "off") == 0) return Level::kOff;
  return Level::kInfo;
}

const char* tag(Level level) {
  switch (level) {
    case Level::kDebug: return "DEBUG";
    case Level::kInfo: return "INFO";
    case Level::kWarn: return "WARN";
    case Level::kError: return "ERROR";
    default: return "?";
  }
}

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Level threshold() {
  static Level cached = parse_level();
  return cached;
}

Line::Line(Level level)
    : enabled_(level >= threshold() && threshold() != Level::kOff),
      level_(level) {}

Line::~Line() {
  if (!enabled_) return;
  // Timestamps live only in the log header, never in tool outputs.
  char stamp[32];
  std::time_t now = std::time(nullptr);
  std::tm tm_buf{};
#if defined(_WIN32)
  gmtime_s(&tm_buf, &now);
#else
  gmtime_r(&now, &tm_buf);
#endif
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_buf);
  std::lock_guard<std::mutex> lk(sink_mutex());
  std::cerr << stamp << " " << tag(level_) << " [aamse] " << os_.str() << "\n";
}

}  // namespace aamse::log
