// src/wav.cc

// Copyright 2026  sfvoc authors

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

#include "sfvoc/wav.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "sfvoc/error.h"

namespace sfvoc {

namespace {

uint32_t ReadU32(const uint8_t *p) {
  return p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<uint32_t>(p[3]) << 24);
}
uint16_t ReadU16(const uint8_t *p) { return p[0] | (p[1] << 8); }

void PutU32(std::vector<uint8_t> &out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xff);
}
void PutU16(std::vector<uint8_t> &out, uint16_t v) {
  out.push_back(v & 0xff);
  out.push_back(v >> 8);
}
void PutTag(std::vector<uint8_t> &out, const char *tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

Waveform ReadWav(const std::string &path, std::optional<int> expected_rate) {
  std::ifstream is(path, std::ios::binary);
  SFVOC_CHECK(is.good(), ErrorCode::kIo, "cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(is)),
                             std::istreambuf_iterator<char>());
  SFVOC_CHECK(bytes.size() >= 12 && std::memcmp(bytes.data(), "RIFF", 4) == 0 &&
                  std::memcmp(bytes.data() + 8, "WAVE", 4) == 0,
              ErrorCode::kUnsupportedFormat, path + ": not a RIFF/WAVE file");

  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  const uint8_t *data = nullptr;
  size_t data_len = 0;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const uint8_t *chunk = bytes.data() + pos;
    const uint32_t len = ReadU32(chunk + 4);
    const size_t body = pos + 8;
    SFVOC_CHECK(body + len <= bytes.size(), ErrorCode::kCorrupt,
                path + ": truncated chunk");
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      SFVOC_CHECK(len >= 16, ErrorCode::kCorrupt, path + ": short fmt chunk");
      format = ReadU16(bytes.data() + body);
      channels = ReadU16(bytes.data() + body + 2);
      rate = ReadU32(bytes.data() + body + 4);
      bits = ReadU16(bytes.data() + body + 14);
      if (format == 0xFFFE && len >= 26)  // WAVE_FORMAT_EXTENSIBLE
        format = ReadU16(bytes.data() + body + 24);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_len = len;
    }
    pos = body + len + (len & 1);
  }
  SFVOC_CHECK(have_fmt && data != nullptr, ErrorCode::kCorrupt,
              path + ": missing fmt or data chunk");
  SFVOC_CHECK(format == 1 && bits == 16, ErrorCode::kUnsupportedFormat,
              path + ": only 16-bit PCM is supported");
  SFVOC_CHECK(channels == 1, ErrorCode::kChannelCount,
              path + ": expected mono, found " + std::to_string(channels) +
                  " channels");
  if (expected_rate) {
    SFVOC_CHECK(static_cast<int>(rate) == *expected_rate,
                ErrorCode::kRateMismatch,
                path + ": sample rate " + std::to_string(rate) +
                    " Hz, pipeline expects " + std::to_string(*expected_rate) +
                    " Hz");
  }

  Waveform wave;
  wave.sample_rate = static_cast<int>(rate);
  wave.samples.resize(data_len / 2);
  for (size_t i = 0; i < wave.samples.size(); ++i) {
    const int16_t v = static_cast<int16_t>(ReadU16(data + 2 * i));
    wave.samples[i] = v / 32768.0;
  }
  return wave;
}

void WriteWav(const std::string &path, const Waveform &wave) {
  const uint32_t data_len = static_cast<uint32_t>(wave.samples.size() * 2);
  std::vector<uint8_t> out;
  out.reserve(44 + data_len);
  PutTag(out, "RIFF");
  PutU32(out, 36 + data_len);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, 1);
  PutU16(out, 1);
  PutU32(out, wave.sample_rate);
  PutU32(out, wave.sample_rate * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  PutTag(out, "data");
  PutU32(out, data_len);
  for (double s : wave.samples) {
    SFVOC_CHECK(std::isfinite(s), ErrorCode::kNonFinite,
                "non-finite sample written to " + path);
    const double q = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
    PutU16(out, static_cast<uint16_t>(static_cast<int16_t>(q)));
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  SFVOC_CHECK(os.good(), ErrorCode::kIo, "cannot write " + path);
  os.write(reinterpret_cast<const char *>(out.data()), out.size());
  SFVOC_CHECK(os.good(), ErrorCode::kIo, "write failed for " + path);
}

}  // namespace sfvoc
