// core/src/signal/wave.cc

// Copyright 2026 AAMSE Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "aamse/signal/wave.h"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace aamse::signal {

void validate(const Waveform& w, const char* what) {
  if (w.rate <= 0) throw InvalidInput(std::string(what) + ": rate must be > 0");
  if (w.samples.empty())
    throw InvalidInput(std::string(what) + ": empty waveform");
  for (double s : w.samples) {
    if (!std::isfinite(s))
      throw InvalidInput(std::string(what) + ": non-finite sample");
  }
}

double rms(const std::vector<double>& samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (double s : samples) acc += s * s;
  return std::sqrt(acc / double(samples.size()));
}

double peak(const std::vector<double>& samples) {
  double p = 0.0;
  for (double s : samples) p = std::max(p, std::fabs(s));
  return p;
}

namespace {

uint32_t read_u32(const unsigned char* p) {
  return uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 |
         uint32_t(p[3]) << 24;
}

uint16_t read_u16(const unsigned char* p) {
  return uint16_t(p[0]) | uint16_t(p[1]) << 8;
}

void put_u32(std::string& s, uint32_t v) {
  s.push_back(char(v & 0xff));
  s.push_back(char((v >> 8) & 0xff));
  s.push_back(char((v >> 16) & 0xff));
  s.push_back(char((v >> 24) & 0xff));
}

void put_u16(std::string& s, uint16_t v) {
  s.push_back(char(v & 0xff));
  s.push_back(char((v >> 8) & 0xff));
}

}  // namespace

Waveform read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open wav file: " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  const unsigned char* p = reinterpret_cast<const unsigned char*>(bytes.data());
  size_t n = bytes.size();
  if (n < 12 || std::memcmp(p, "RIFF", 4) != 0)
    throw IoError(path + ": missing RIFF header");
  if (std::memcmp(p + 8, "WAVE", 4) != 0)
    throw IoError(path + ": RIFF form type is not WAVE");

  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  const unsigned char* data = nullptr;
  uint32_t data_len = 0;

  size_t off = 12;
  while (off + 8 <= n) {
    const unsigned char* chunk = p + off;
    uint32_t chunk_len = read_u32(chunk + 4);
    size_t body = off + 8;
    if (body + chunk_len > n)
      throw IoError(path + ": truncated chunk near offset " +
                    std::to_string(off));
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (chunk_len < 16) throw IoError(path + ": fmt chunk too short");
      format = read_u16(p + body);
      channels = read_u16(p + body + 2);
      sample_rate = read_u32(p + body + 4);
      bits = read_u16(p + body + 14);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = p + body;
      data_len = chunk_len;
    }
    off = body + chunk_len + (chunk_len & 1);  // chunks are word-aligned
  }

  if (!have_fmt) throw IoError(path + ": missing fmt chunk");
  if (format != 1)
    throw IoError(path + ": wFormatTag=" + std::to_string(format) +
                  ", only PCM (1) is supported");
  if (channels != 1)
    throw IoError(path + ": nChannels=" + std::to_string(channels) +
                  ", only mono is supported");
  if (bits != 16)
    throw IoError(path + ": wBitsPerSample=" + std::to_string(bits) +
                  ", only 16-bit is supported");
  if (sample_rate != uint32_t(kSampleRate))
    throw IoError(path + ": nSamplesPerSec=" + std::to_string(sample_rate) +
                  ", expected " + std::to_string(kSampleRate));
  if (data == nullptr) throw IoError(path + ": missing data chunk");

  Waveform w;
  w.rate = kSampleRate;
  size_t count = data_len / 2;
  w.samples.resize(count);
  for (size_t i = 0; i < count; ++i) {
    int16_t v = int16_t(read_u16(data + 2 * i));
    w.samples[i] = double(v) / 32768.0;
  }
  return w;
}

void write_wav(const std::string& path, const Waveform& w) {
  if (w.rate != kSampleRate)
    throw InvalidInput("write_wav: rate must be " + std::to_string(kSampleRate));
  std::string body;
  body.reserve(44 + 2 * w.samples.size());
  body += "RIFF";
  put_u32(body, uint32_t(36 + 2 * w.samples.size()));
  body += "WAVEfmt ";
  put_u32(body, 16);
  put_u16(body, 1);                       // PCM
  put_u16(body, 1);                       // mono
  put_u32(body, uint32_t(w.rate));
  put_u32(body, uint32_t(w.rate * 2));    // byte rate
  put_u16(body, 2);                       // block align
  put_u16(body, 16);                      // bits per sample
  body += "data";
  put_u32(body, uint32_t(2 * w.samples.size()));
  for (double s : w.samples) {
    double scaled = std::nearbyint(s * 32768.0);
    if (scaled > 32767.0) scaled = 32767.0;
    if (scaled < -32768.0) scaled = -32768.0;
    put_u16(body, uint16_t(int16_t(scaled)));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create wav file: " + path);
  out.write(body.data(), std::streamsize(body.size()));
  if (!out) throw IoError("short write: " + path);
}

}  // namespace aamse::signal
