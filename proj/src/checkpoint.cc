// src/checkpoint.cc

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

#include "sfvoc/checkpoint.h"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include "sfvoc/error.h"

namespace sfvoc {

static_assert(std::endian::native == std::endian::little,
              "container I/O assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'S', 'F', 'V', 'O', 'C', 'K', 'P', 'T'};

template <typename T>
void Put(std::vector<uint8_t> &out, T v) {
  const auto *p = reinterpret_cast<const uint8_t *>(&v);
  out.insert(out.end(), p, p + sizeof(T));
}

class Reader {
 public:
  Reader(const std::vector<uint8_t> &buf, size_t end, const std::string &path)
      : buf_(buf), end_(end), path_(path) {}

  template <typename T>
  T Get() {
    T v;
    Need(sizeof(T));
    std::memcpy(&v, buf_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::string GetString(size_t n) {
    Need(n);
    std::string s(reinterpret_cast<const char *>(buf_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  void GetDoubles(double *dst, size_t n) {
    Need(n * sizeof(double));
    std::memcpy(dst, buf_.data() + pos_, n * sizeof(double));
    pos_ += n * sizeof(double);
  }
  size_t pos() const { return pos_; }

 private:
  void Need(size_t n) {
    SFVOC_CHECK(pos_ + n <= end_, ErrorCode::kCorrupt,
                path_ + ": truncated container");
  }
  const std::vector<uint8_t> &buf_;
  size_t end_;
  size_t pos_ = 0;
  const std::string &path_;
};

}  // namespace

void WriteContainer(const std::string &path, const Container &c) {
  std::vector<uint8_t> out(kMagic, kMagic + 8);
  Put<uint32_t>(out, kContainerVersion);
  const std::string meta = c.meta.dump();
  Put<uint64_t>(out, meta.size());
  out.insert(out.end(), meta.begin(), meta.end());
  Put<uint64_t>(out, c.arrays.size());
  for (const auto &[name, t] : c.arrays) {
    SFVOC_CHECK(NumElements(t.shape) == t.size(), ErrorCode::kShapeMismatch,
                "array " + name + " has inconsistent shape");
    Put<uint32_t>(out, static_cast<uint32_t>(name.size()));
    out.insert(out.end(), name.begin(), name.end());
    Put<uint32_t>(out, static_cast<uint32_t>(t.shape.size()));
    for (int64_t d : t.shape) Put<int64_t>(out, d);
    const auto *p = reinterpret_cast<const uint8_t *>(t.data.data());
    out.insert(out.end(), p, p + t.data.size() * sizeof(double));
  }
  const uint32_t crc = static_cast<uint32_t>(
      crc32(0L, out.data(), static_cast<uInt>(out.size())));
  Put<uint32_t>(out, crc);

  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    SFVOC_CHECK(os.good(), ErrorCode::kIo, "cannot write " + tmp);
    os.write(reinterpret_cast<const char *>(out.data()), out.size());
    SFVOC_CHECK(os.good(), ErrorCode::kIo, "write failed for " + tmp);
  }
  SFVOC_CHECK(std::rename(tmp.c_str(), path.c_str()) == 0, ErrorCode::kIo,
              "cannot rename " + tmp + " to " + path);
}

Container ReadContainer(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  SFVOC_CHECK(is.good(), ErrorCode::kIo, "cannot open " + path);
  std::vector<uint8_t> buf((std::istreambuf_iterator<char>(is)),
                           std::istreambuf_iterator<char>());
  SFVOC_CHECK(buf.size() >= 8 + 4 + 4 && std::memcmp(buf.data(), kMagic, 8) == 0,
              ErrorCode::kCorrupt, path + ": not a checkpoint container");
  const size_t body = buf.size() - 4;
  uint32_t stored;
  std::memcpy(&stored, buf.data() + body, 4);
  const uint32_t crc =
      static_cast<uint32_t>(crc32(0L, buf.data(), static_cast<uInt>(body)));

  Reader r(buf, body, path);
  r.GetString(8);
  const uint32_t version = r.Get<uint32_t>();
  SFVOC_CHECK(version == kContainerVersion, ErrorCode::kVersionMismatch,
              path + ": container version " + std::to_string(version) +
                  ", expected " + std::to_string(kContainerVersion));
  SFVOC_CHECK(crc == stored, ErrorCode::kCorrupt, path + ": checksum mismatch");

  Container c;
  const uint64_t meta_len = r.Get<uint64_t>();
  try {
    c.meta = nlohmann::json::parse(r.GetString(meta_len));
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kCorrupt, path + ": bad metadata: " + e.what());
  }
  const uint64_t count = r.Get<uint64_t>();
  for (uint64_t i = 0; i < count; ++i) {
    const uint32_t name_len = r.Get<uint32_t>();
    std::string name = r.GetString(name_len);
    const uint32_t ndim = r.Get<uint32_t>();
    SFVOC_CHECK(ndim <= 8, ErrorCode::kCorrupt, path + ": bad rank");
    Shape shape(ndim);
    for (auto &d : shape) {
      d = r.Get<int64_t>();
      SFVOC_CHECK(d >= 0, ErrorCode::kCorrupt, path + ": negative dimension");
    }
    const int64_t n = NumElements(shape);
    SFVOC_CHECK(n >= 0 && static_cast<uint64_t>(n) * sizeof(double) <= body - r.pos(),
                ErrorCode::kCorrupt, path + ": array " + name + " exceeds file");
    Tensor t(shape);
    r.GetDoubles(t.data.data(), t.data.size());
    c.arrays.emplace(std::move(name), std::move(t));
  }
  SFVOC_CHECK(r.pos() == body, ErrorCode::kCorrupt,
              path + ": trailing bytes in container");
  return c;
}

}  // namespace sfvoc
