// src/fft.cc

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

#include "sfvoc/fft.h"

#include <cmath>
#include <map>
#include <memory>
#include <numbers>

#include "sfvoc/error.h"

namespace sfvoc {

Fft::Fft(int n) : n_(n), pow2_(n > 0 && (n & (n - 1)) == 0) {
  SFVOC_CHECK(n >= 1, ErrorCode::kInvalidArgument, "FFT size must be >= 1");
  const int tw = pow2_ ? std::max(1, n / 2) : n;
  twiddles_.resize(tw);
  for (int k = 0; k < tw; ++k) {
    const double a = -2.0 * std::numbers::pi * k / n;
    twiddles_[k] = Complex(std::cos(a), std::sin(a));
  }
  if (pow2_) {
    bitrev_.resize(n);
    int bits = 0;
    while ((1 << bits) < n) ++bits;
    for (int i = 0; i < n; ++i) {
      int r = 0;
      for (int b = 0; b < bits; ++b)
        if (i & (1 << b)) r |= 1 << (bits - 1 - b);
      bitrev_[i] = r;
    }
  }
  scratch_.resize(n);
}

void Fft::Transform(std::span<Complex> data, bool inverse) const {
  SFVOC_CHECK(static_cast<int>(data.size()) == n_, ErrorCode::kShapeMismatch,
              "FFT buffer size mismatch");
  if (!pow2_) {
    for (int k = 0; k < n_; ++k) {
      Complex acc = 0.0;
      for (int t = 0; t < n_; ++t) {
        Complex w = twiddles_[(static_cast<int64_t>(k) * t) % n_];
        acc += data[t] * (inverse ? std::conj(w) : w);
      }
      scratch_[k] = acc;
    }
    std::copy(scratch_.begin(), scratch_.end(), data.begin());
    return;
  }
  for (int i = 0; i < n_; ++i)
    if (i < bitrev_[i]) std::swap(data[i], data[bitrev_[i]]);
  for (int len = 2; len <= n_; len <<= 1) {
    const int half = len / 2;
    const int step = n_ / len;
    for (int start = 0; start < n_; start += len) {
      for (int j = 0; j < half; ++j) {
        Complex w = twiddles_[j * step];
        if (inverse) w = std::conj(w);
        const Complex u = data[start + j];
        const Complex v = data[start + j + half] * w;
        data[start + j] = u + v;
        data[start + j + half] = u - v;
      }
    }
  }
}

void Fft::Rfft(std::span<const double> in, std::span<Complex> out) const {
  SFVOC_CHECK(static_cast<int>(in.size()) == n_ &&
                  static_cast<int>(out.size()) == n_ / 2 + 1,
              ErrorCode::kShapeMismatch, "Rfft buffer size mismatch");
  std::vector<Complex> buf(in.begin(), in.end());
  Transform(buf, false);
  std::copy(buf.begin(), buf.begin() + out.size(), out.begin());
}

void Fft::Irfft(std::span<const Complex> in, std::span<double> out) const {
  SFVOC_CHECK(n_ % 2 == 0 && static_cast<int>(in.size()) == n_ / 2 + 1 &&
                  static_cast<int>(out.size()) == n_,
              ErrorCode::kShapeMismatch, "Irfft buffer size mismatch");
  const int nb = n_ / 2 + 1;
  std::vector<Complex> buf(n_);
  buf[0] = Complex(in[0].real(), 0.0);
  buf[n_ / 2] = Complex(in[nb - 1].real(), 0.0);
  for (int k = 1; k < n_ / 2; ++k) {
    buf[k] = in[k];
    buf[n_ - k] = std::conj(in[k]);
  }
  Transform(buf, true);
  const double scale = 1.0 / n_;
  for (int i = 0; i < n_; ++i) out[i] = buf[i].real() * scale;
}

const Fft &GetFft(int n) {
  thread_local std::map<int, std::unique_ptr<Fft>> cache;
  auto &slot = cache[n];
  if (!slot) slot = std::make_unique<Fft>(n);
  return *slot;
}

}  // namespace sfvoc
