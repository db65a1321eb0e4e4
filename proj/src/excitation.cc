// src/excitation.cc

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

#include "sfvoc/excitation.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "sfvoc/error.h"

namespace sfvoc {

void F0Sequence::Validate(int sample_rate) const {
  for (size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    SFVOC_CHECK(std::isfinite(v) && v >= 0.0 && v < sample_rate / 2.0,
                ErrorCode::kInvalidArgument,
                "F0 frame " + std::to_string(i) + " out of range: " +
                    std::to_string(v));
  }
}

void ExcitationConfig::Validate() const {
  SFVOC_CHECK(alpha > 0.0, ErrorCode::kInvalidArgument, "alpha must be > 0");
  SFVOC_CHECK(sigma >= 0.0, ErrorCode::kInvalidArgument, "sigma must be >= 0");
  SFVOC_CHECK(sample_rate > 0, ErrorCode::kInvalidArgument,
              "sample_rate must be > 0");
}

PointF0 UpsampleF0(const F0Sequence &f0, int frame_shift) {
  SFVOC_CHECK(frame_shift >= 1, ErrorCode::kInvalidArgument,
              "frame_shift must be >= 1");
  PointF0 out;
  out.values.reserve(f0.values.size() * frame_shift);
  for (double v : f0.values) out.values.insert(out.values.end(), frame_shift, v);
  return out;
}

std::optional<int> HarmonicCount(std::span<const double> f0, int sample_rate) {
  double lowest = 0.0;
  for (double v : f0)
    if (v > 0.0 && (lowest == 0.0 || v < lowest)) lowest = v;
  if (lowest == 0.0) return std::nullopt;
  return static_cast<int>(std::floor((sample_rate / 2.0) / lowest));
}

Waveform ProduceExcitation(const PointF0 &f0, const ExcitationConfig &cfg) {
  cfg.Validate();
  const F0Sequence check{f0.values};
  check.Validate(cfg.sample_rate);

  Waveform e;
  e.sample_rate = cfg.sample_rate;
  e.samples.assign(f0.values.size(), 0.0);

  std::mt19937_64 rng(cfg.rng_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::optional<int> k_max = HarmonicCount(f0.values, cfg.sample_rate);
  const double amp = k_max ? cfg.alpha / std::sqrt(static_cast<double>(*k_max))
                           : 0.0;
  const double nyquist = cfg.sample_rate / 2.0;
  const double two_pi = 2.0 * std::numbers::pi;

  double phase = 0.0;  // cumulative, wrapped to [0, 2 pi)
  for (size_t t = 0; t < f0.values.size(); ++t) {
    const double ft = f0.values[t];
    const double z = gauss(rng);
    phase += two_pi * ft / cfg.sample_rate;
    phase = std::fmod(phase, two_pi);
    if (ft <= 0.0) {
      e.samples[t] = z / 3.0;
      continue;
    }
    const int active = std::min(*k_max, static_cast<int>(nyquist / ft));
    double sum = 0.0;
    for (int k = 1; k <= active; ++k) sum += std::sin(k * phase);
    e.samples[t] = amp * sum + cfg.sigma * z;
  }
  return e;
}

Waveform ProduceNoiseExcitation(const PointF0 &f0, const ExcitationConfig &cfg) {
  const Waveform full = ProduceExcitation(f0, cfg);
  double energy = 0.0;
  for (double v : full.samples) energy += v * v;
  const double rms =
      full.samples.empty() ? 0.0 : std::sqrt(energy / full.samples.size());
  Waveform out;
  out.sample_rate = cfg.sample_rate;
  out.samples.resize(full.samples.size());
  std::mt19937_64 rng(cfg.rng_seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (double &v : out.samples) v = rms * gauss(rng);
  return out;
}

}  // namespace sfvoc
