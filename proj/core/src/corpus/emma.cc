// core/src/corpus/emma.cc

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "aamse/corpus/emma.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace aamse::corpus {

const std::vector<std::string>& sensor_canon() {
  static const std::vector<std::string> canon = {"UL", "LL", "UJ", "LJ", "T1",
                                                 "T2", "T3", "T4", "VM"};
  return canon;
}

size_t sensor_index(const std::string& label) {
  const auto& canon = sensor_canon();
  for (size_t i = 0; i < canon.size(); ++i)
    if (canon[i] == label) return i;
  std::string valid;
  for (const auto& s : canon) {
    if (!valid.empty()) valid += ",";
    valid += s;
  }
  throw InvalidInput("unknown sensor label '" + label + "' (valid: " + valid +
                     ")");
}

void validate(const ArticulatoryTrack& t, const char* what) {
  if (t.rate <= 0) throw InvalidInput(std::string(what) + ": rate must be > 0");
  if (t.sensors.empty())
    throw InvalidInput(std::string(what) + ": no sensors");
  if (t.channel_count() != 2 * t.sensors.size())
    throw InvalidInput(std::string(what) +
                       ": channel count must be 2 x sensor count");
  for (const auto& s : t.sensors) sensor_index(s);
  for (double v : t.channels.data())
    if (!std::isfinite(v))
      throw InvalidInput(std::string(what) + ": non-finite channel value");
}

ArticulatoryTrack select_sensors(const ArticulatoryTrack& t,
                                 const std::vector<std::string>& keep) {
  validate(t, "select_sensors");
  if (keep.empty()) throw InvalidInput("select_sensors: empty sensor set");

  // Resolve the kept labels against the canonical order, then locate each
  // in the source track.
  std::vector<std::string> ordered;
  for (const auto& label : sensor_canon()) {
    bool wanted = false;
    for (const auto& k : keep) {
      sensor_index(k);  // reject unknown labels even if not present
      if (k == label) wanted = true;
    }
    if (wanted) ordered.push_back(label);
  }
  if (ordered.size() != keep.size())
    throw InvalidInput("select_sensors: duplicate labels in keep set");

  ArticulatoryTrack out;
  out.rate = t.rate;
  out.sensors = ordered;
  out.channels = Matrix(2 * ordered.size(), t.length());
  for (size_t i = 0; i < ordered.size(); ++i) {
    auto it = std::find(t.sensors.begin(), t.sensors.end(), ordered[i]);
    if (it == t.sensors.end())
      throw InvalidInput("select_sensors: sensor '" + ordered[i] +
                         "' not present in track");
    size_t src = size_t(it - t.sensors.begin());
    std::memcpy(out.channels.row(2 * i), t.channels.row(2 * src),
                t.length() * sizeof(double));
    std::memcpy(out.channels.row(2 * i + 1), t.channels.row(2 * src + 1),
                t.length() * sizeof(double));
  }
  return out;
}

namespace {

// Value of one channel at fractional knot position `pos` (in track samples),
// linear between knots, linearly extrapolated past the final knot.
double sample_channel(const double* ch, size_t n, double pos) {
  if (pos <= 0.0) return ch[0];
  double last = double(n - 1);
  if (pos >= last) {
    if (n == 1) return ch[0];
    return ch[n - 1] + (pos - last) * (ch[n - 1] - ch[n - 2]);
  }
  size_t i = size_t(pos);
  double frac = pos - double(i);
  if (frac == 0.0) return ch[i];
  return ch[i] + frac * (ch[i + 1] - ch[i]);
}

}  // namespace

Matrix align_to_waveform(const ArticulatoryTrack& t) {
  validate(t, "align_to_waveform");
  if (t.rate != kEmmaRate)
    throw InvalidInput("align_to_waveform: expected 250 Hz track");
  const size_t n = t.length();
  if (n < 2) throw InvalidInput("align_to_waveform: need at least 2 samples");

  const int factor = signal::kSampleRate / kEmmaRate;  // 64
  const size_t out_len = n * size_t(factor);
  Matrix out(t.channel_count(), out_len);
  for (size_t c = 0; c < t.channel_count(); ++c) {
    const double* src = t.channels.row(c);
    double* dst = out.row(c);
    for (size_t k = 0; k < out_len; ++k) {
      size_t i = k / size_t(factor);
      size_t r = k % size_t(factor);
      if (r == 0) {
        dst[k] = src[i];  // knots bit-exact
      } else {
        double pos = double(i) + double(r) / double(factor);
        dst[k] = sample_channel(src, n, pos);
      }
    }
  }
  return out;
}

Matrix align_to_frames(const ArticulatoryTrack& t, const signal::StftParams& p,
                       size_t target_samples) {
  validate(t, "align_to_frames");
  signal::validate(p);
  if (t.rate != kEmmaRate)
    throw InvalidInput("align_to_frames: expected 250 Hz track");
  const size_t n = t.length();
  if (n < 2) throw InvalidInput("align_to_frames: need at least 2 samples");

  const int factor = signal::kSampleRate / kEmmaRate;  // 64
  size_t samples = n * size_t(factor);
  if (target_samples != 0) {
    long long diff = static_cast<long long>(target_samples) - static_cast<long long>(samples);
    if (diff < -factor || diff > factor)
      throw AlignmentError(
          "align_to_frames: track duration differs from audio by " +
          std::to_string(diff) + " samples (> one EMMA period)");
    samples = target_samples;
  }

  // Frame m is centered on source sample m*hop under center padding.
  const size_t frames = signal::frame_count(samples, p);
  Matrix out(t.channel_count(), frames);
  for (size_t c = 0; c < t.channel_count(); ++c) {
    const double* src = t.channels.row(c);
    double* dst = out.row(c);
    for (size_t m = 0; m < frames; ++m) {
      double pos = double(m) * double(p.hop) / double(factor);
      dst[m] = sample_channel(src, n, pos);
    }
  }
  return out;
}

ArticulatoryTrack read_track(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open track file: " + path);
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string magic, version, rate_kv, sensors_kv;
  hs >> magic >> version >> rate_kv >> sensors_kv;
  if (magic != "EMMA" || version != "v1")
    throw IoError(path + ": bad track header '" + header + "'");
  if (rate_kv.rfind("rate=", 0) != 0 || sensors_kv.rfind("sensors=", 0) != 0)
    throw IoError(path + ": malformed track header fields");

  ArticulatoryTrack t;
  t.rate = std::stoi(rate_kv.substr(5));
  std::istringstream ss(sensors_kv.substr(8));
  std::string label;
  while (std::getline(ss, label, ',')) t.sensors.push_back(label);
  if (t.sensors.empty()) throw IoError(path + ": no sensors in header");

  std::vector<char> raw((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
  const size_t chans = 2 * t.sensors.size();
  if (raw.size() % (4 * chans) != 0)
    throw IoError(path + ": body is not a whole number of frames");
  const size_t steps = raw.size() / (4 * chans);
  t.channels = Matrix(chans, steps);
  const unsigned char* p = reinterpret_cast<const unsigned char*>(raw.data());
  for (size_t s = 0; s < steps; ++s) {
    for (size_t c = 0; c < chans; ++c) {
      uint32_t u = uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 |
                   uint32_t(p[3]) << 24;
      float f;
      std::memcpy(&f, &u, 4);
      t.channels.at(c, s) = double(f);
      p += 4;
    }
  }
  validate(t, "read_track");
  return t;
}

void write_track(const std::string& path, const ArticulatoryTrack& t) {
  validate(t, "write_track");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create track file: " + path);
  out << "EMMA v1 rate=" << t.rate << " sensors=";
  for (size_t i = 0; i < t.sensors.size(); ++i) {
    if (i) out << ",";
    out << t.sensors[i];
  }
  out << "\n";
  const size_t chans = t.channel_count();
  std::string body;
  body.reserve(4 * chans * t.length());
  for (size_t s = 0; s < t.length(); ++s) {
    for (size_t c = 0; c < chans; ++c) {
      float f = float(t.channels.at(c, s));
      uint32_t u;
      std::memcpy(&u, &f, 4);
      body.push_back(char(u & 0xff));
      body.push_back(char((u >> 8) & 0xff));
      body.push_back(char((u >> 16) & 0xff));
      body.push_back(char((u >> 24) & 0xff));
    }
  }
  out.write(body.data(), std::streamsize(body.size()));
  if (!out) throw IoError("short write: " + path);
}

}  // namespace aamse::corpus
