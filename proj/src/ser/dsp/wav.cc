// ser/dsp/wav.cc

// Copyright 2026  ser-duo contributors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "ser/dsp/wav.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>

#include "ser/common/error.h"
#include "ser/common/textio.h"

namespace ser::dsp {

namespace {

uint32_t le32(const unsigned char *p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t le16(const unsigned char *p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void put_le32(std::string &out, uint32_t v) {
  for (int b = 0; b < 4; ++b)
    out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

void put_le16(std::string &out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

Waveform read_wav(const std::string &path) {
  const std::string bytes = common::read_text_file(path);
  const auto *p = reinterpret_cast<const unsigned char *>(bytes.data());
  const size_t n = bytes.size();
  if (n < 12 || std::memcmp(p, "RIFF", 4) != 0 ||
      std::memcmp(p + 8, "WAVE", 4) != 0)
    throw DataError(path + ": not a RIFF/WAVE file");

  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  size_t data_off = 0, data_len = 0;
  size_t at = 12;
  while (at + 8 <= n) {
    const char *id = bytes.data() + at;
    const uint32_t len = le32(p + at + 4);
    const size_t body = at + 8;
    if (body + len > n)
      throw DataError(path + ": truncated chunk '" + std::string(id, 4) + "'");
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (len < 16) throw DataError(path + ": fmt chunk too small");
      format = le16(p + body);
      channels = le16(p + body + 2);
      rate = le32(p + body + 4);
      bits = le16(p + body + 14);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data_off = body;
      data_len = len;
    }
    at = body + len + (len & 1);  // chunks are word-aligned
  }
  if (!have_fmt) throw DataError(path + ": missing fmt chunk");
  if (data_off == 0 && data_len == 0)
    throw DataError(path + ": missing data chunk");
  if (channels != 1)
    throw DataError(path + ": expected mono, got " +
                    std::to_string(channels) + " channels");
  if (rate == 0) throw DataError(path + ": zero sample rate");

  Waveform w;
  w.sample_rate = static_cast<int>(rate);
  if (format == 1 && bits == 16) {
    if (data_len % 2)
      throw DataError(path + ": odd PCM16 data length");
    w.samples.reserve(data_len / 2);
    for (size_t i = 0; i + 2 <= data_len; i += 2) {
      const auto s = static_cast<int16_t>(le16(p + data_off + i));
      w.samples.push_back(s / 32768.0);
    }
  } else if (format == 3 && bits == 32) {
    if (data_len % 4)
      throw DataError(path + ": odd float32 data length");
    w.samples.reserve(data_len / 4);
    for (size_t i = 0; i + 4 <= data_len; i += 4) {
      const uint32_t u = le32(p + data_off + i);
      float f;
      std::memcpy(&f, &u, sizeof f);
      if (!std::isfinite(f))
        throw DataError(path + ": non-finite sample at offset " +
                        std::to_string(i));
      w.samples.push_back(static_cast<double>(f));
    }
  } else {
    throw DataError(path + ": unsupported encoding (format tag " +
                    std::to_string(format) + ", " + std::to_string(bits) +
                    " bits); only mono PCM16 and float32 are read");
  }
  return w;
}

void write_wav_pcm16(const std::string &path, const Waveform &w) {
  if (w.sample_rate <= 0)
    throw StructuralError("write_wav_pcm16: sample_rate must be positive");
  const uint32_t data_len = static_cast<uint32_t>(w.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_len);
  out += "RIFF";
  put_le32(out, 36 + data_len);
  out += "WAVE";
  out += "fmt ";
  put_le32(out, 16);
  put_le16(out, 1);  // PCM
  put_le16(out, 1);  // mono
  put_le32(out, static_cast<uint32_t>(w.sample_rate));
  put_le32(out, static_cast<uint32_t>(w.sample_rate) * 2);  // byte rate
  put_le16(out, 2);   // block align
  put_le16(out, 16);  // bits
  out += "data";
  put_le32(out, data_len);
  for (double s : w.samples) {
    const double clamped = std::clamp(s, -1.0, 1.0);
    const auto q = static_cast<int16_t>(std::lrint(clamped * 32767.0));
    put_le16(out, static_cast<uint16_t>(q));
  }
  common::write_text_file(path, out);
}

Waveform resample_linear(const Waveform &w, int target_rate) {
  if (w.sample_rate <= 0 || target_rate <= 0)
    throw StructuralError("resample_linear: rates must be positive");
  if (w.sample_rate == target_rate) return w;
  if (w.samples.empty()) return Waveform{{}, target_rate};
  Waveform out;
  out.sample_rate = target_rate;
  const double step = static_cast<double>(w.sample_rate) / target_rate;
  const auto out_len = static_cast<size_t>(
      std::floor((w.samples.size() - 1) / step)) + 1;
  out.samples.reserve(out_len);
  for (size_t i = 0; i < out_len; ++i) {
    const double pos = i * step;
    const auto lo = static_cast<size_t>(pos);
    const double frac = pos - lo;
    const double a = w.samples[lo];
    const double b = lo + 1 < w.samples.size() ? w.samples[lo + 1] : a;
    out.samples.push_back(a + frac * (b - a));
  }
  return out;
}

}  // namespace ser::dsp
