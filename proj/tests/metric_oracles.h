// tests/metric_oracles.h

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

#ifndef SFVOC_TESTS_METRIC_ORACLES_H_
#define SFVOC_TESTS_METRIC_ORACLES_H_

// Straightforward reimplementations of the evaluation metrics, sharing no
// code with the library beyond the Tensor container.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "sfvoc/stft.h"
#include "sfvoc/tensor.h"
#include "test_util.h"

namespace sfvoc::testing {

inline const double kMcdScale = 10.0 * std::sqrt(2.0) / std::log(10.0);

// Amplitude spectrogram written out from scratch: reflect padding, periodic
// Hann window, zero-padded direct DFT.
inline Tensor BruteAmplitude(const std::vector<double> &x, const StftConfig &cfg) {
  const int64_t t = static_cast<int64_t>(x.size());
  const int pad = (cfg.frame_length - cfg.frame_shift) / 2;
  const int64_t frames = (t + cfg.frame_shift - 1) / cfg.frame_shift;
  auto at = [&](int64_t i) {
    int64_t j = i - pad;
    if (j < 0) j = -j;
    if (j >= t) j = 2 * (t - 1) - j;
    return x[j];
  };
  Tensor a({frames, cfg.fft_size / 2 + 1});
  for (int64_t f = 0; f < frames; ++f) {
    std::vector<double> frame(cfg.frame_length);
    for (int i = 0; i < cfg.frame_length; ++i)
      frame[i] = at(f * cfg.frame_shift + i) *
                 (0.5 - 0.5 * std::cos(2 * std::numbers::pi * i / cfg.frame_length));
    const auto dft = testing::BruteDft(frame, cfg.fft_size);
    for (int k = 0; k <= cfg.fft_size / 2; ++k) a.at(f, k) = std::abs(dft[k]);
  }
  return a;
}

inline double BruteLas(const Tensor &a, const Tensor &b) {
  double acc = 0;
  for (int64_t i = 0; i < a.size(); ++i) {
    const double d = 20 * std::log10(std::max(a.data[i], 1e-5)) -
                     20 * std::log10(std::max(b.data[i], 1e-5));
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(a.size()));
}

inline std::vector<double> BruteCepstrum(const std::vector<double> &x, int order) {
  const int m = static_cast<int>(x.size());
  std::vector<double> c(order);
  for (int k = 1; k <= order; ++k) {
    double s = 0;
    for (int n = 0; n < m; ++n)
      s += x[n] * std::cos(std::numbers::pi * k * (n + 0.5) / m);
    c[k - 1] = s * std::sqrt(2.0 / m);
  }
  return c;
}

inline double BruteMcd(const Tensor &a, const Tensor &b) {
  double total = 0;
  for (int64_t f = 0; f < a.rows(); ++f) {
    std::vector<double> ra(a.cols()), rb(b.cols());
    for (int64_t k = 0; k < a.cols(); ++k) {
      ra[k] = a.at(f, k);
      rb[k] = b.at(f, k);
    }
    const auto ca = BruteCepstrum(ra, 24), cb = BruteCepstrum(rb, 24);
    double d = 0;
    for (int k = 0; k < 24; ++k) d += (ca[k] - cb[k]) * (ca[k] - cb[k]);
    total += std::sqrt(d);
  }
  return kMcdScale * total / static_cast<double>(a.rows());
}

// RMSE in cents over frames voiced in both; negative when none are.
inline double BruteF0Rmse(const std::vector<double> &a, const std::vector<double> &b) {
  double acc = 0;
  int n = 0;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > 0 && b[i] > 0) {
      const double c = 1200 * std::log2(a[i] / b[i]);
      acc += c * c;
      ++n;
    }
  return n ? std::sqrt(acc / n) : -1.0;
}

inline double BruteVuv(const std::vector<double> &a, const std::vector<double> &b) {
  int diff = 0;
  for (size_t i = 0; i < a.size(); ++i) diff += (a[i] > 0) != (b[i] > 0);
  return 100.0 * diff / static_cast<double>(a.size());
}

}  // namespace sfvoc::testing

#endif  // SFVOC_TESTS_METRIC_ORACLES_H_
