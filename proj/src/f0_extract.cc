// src/f0_extract.cc

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

#include "sfvoc/f0_extract.h"

#include <algorithm>
#include <cmath>

#include "sfvoc/error.h"

namespace sfvoc {

void F0ExtractConfig::Validate(int sample_rate) const {
  SFVOC_CHECK(min_hz > 0 && max_hz > min_hz && max_hz < sample_rate / 2.0,
              ErrorCode::kInvalidArgument, "f0 search range is invalid");
  SFVOC_CHECK(window >= 16, ErrorCode::kInvalidArgument, "f0 window too short");
  SFVOC_CHECK(voicing_threshold > 0 && voicing_threshold < 1,
              ErrorCode::kInvalidArgument, "voicing threshold must be in (0, 1)");
}

F0Sequence ExtractF0(const Waveform &wave, const StftConfig &stft,
                     const F0ExtractConfig &cfg) {
  SFVOC_CHECK(wave.sample_rate == stft.sample_rate, ErrorCode::kRateMismatch,
              "waveform rate differs from analysis rate");
  cfg.Validate(wave.sample_rate);
  const int64_t n = wave.size();
  const int64_t frames = NumFrames(n, stft);
  const int sr = wave.sample_rate;
  const int lag_min = static_cast<int>(std::floor(sr / cfg.max_hz));
  const int lag_max = static_cast<int>(std::ceil(sr / cfg.min_hz));
  const int w = cfg.window;
  auto sample = [&](int64_t i) { return i >= 0 && i < n ? wave.samples[i] : 0.0; };

  std::vector<double> rms(frames);
  double max_rms = 0;
  for (int64_t f = 0; f < frames; ++f) {
    const int64_t start = f * stft.frame_shift + stft.frame_shift / 2 - w / 2;
    double e = 0;
    for (int i = 0; i < w; ++i) e += sample(start + i) * sample(start + i);
    rms[f] = std::sqrt(e / w);
    max_rms = std::max(max_rms, rms[f]);
  }
  const double energy_floor =
      std::max(cfg.absolute_energy_floor, cfg.relative_energy_floor * max_rms);

  F0Sequence out;
  out.values.assign(frames, 0.0);
  std::vector<double> r(lag_max + 2);
  for (int64_t f = 0; f < frames; ++f) {
    if (rms[f] <= energy_floor) continue;
    const int64_t start = f * stft.frame_shift + stft.frame_shift / 2 - w / 2;
    double e0 = 0;
    for (int i = 0; i < w; ++i) e0 += sample(start + i) * sample(start + i);
    double best = -1;
    for (int lag = lag_min - 1; lag <= lag_max + 1; ++lag) {
      double xy = 0, e1 = 0;
      for (int i = 0; i < w; ++i) {
        const double b = sample(start + i + lag);
        xy += sample(start + i) * b;
        e1 += b * b;
      }
      r[lag] = e1 > 0 ? xy / std::sqrt(e0 * e1) : 0.0;
      if (lag >= lag_min && lag <= lag_max) best = std::max(best, r[lag]);
    }
    if (best < cfg.voicing_threshold) continue;
    // Smallest lag whose peak is close to the best one; avoids picking a
    // multiple of the period.
    int chosen = -1;
    for (int lag = lag_min; lag <= lag_max; ++lag) {
      if (r[lag] >= 0.9 * best && r[lag] >= r[lag - 1] && r[lag] >= r[lag + 1]) {
        chosen = lag;
        break;
      }
    }
    if (chosen < 0) continue;
    const double a = r[chosen - 1], b = r[chosen], c = r[chosen + 1];
    const double denom = a - 2 * b + c;
    double offset = denom < 0 ? 0.5 * (a - c) / denom : 0.0;
    offset = std::clamp(offset, -0.5, 0.5);
    out.values[f] = sr / (chosen + offset);
  }
  return out;
}

}  // namespace sfvoc
