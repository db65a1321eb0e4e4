// src/stft.cc

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

#include "sfvoc/stft.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sfvoc/error.h"

namespace sfvoc {

void StftConfig::Validate() const {
  SFVOC_CHECK(sample_rate > 0, ErrorCode::kInvalidArgument,
              "sample_rate must be positive");
  SFVOC_CHECK(frame_shift >= 1 && frame_length >= frame_shift,
              ErrorCode::kInvalidArgument,
              "need 1 <= frame_shift <= frame_length");
  SFVOC_CHECK(frame_length % frame_shift == 0, ErrorCode::kInvalidArgument,
              "frame_shift must divide frame_length");
  SFVOC_CHECK((frame_length - frame_shift) % 2 == 0,
              ErrorCode::kInvalidArgument,
              "frame_length - frame_shift must be even");
  SFVOC_CHECK(fft_size >= frame_length && fft_size % 2 == 0,
              ErrorCode::kInvalidArgument,
              "fft_size must be even and >= frame_length");
  // Squared-window overlap-add must be constant.
  const std::vector<double> w = MakeWindow(*this);
  double lo = 1e300, hi = -1e300;
  for (int n = 0; n < frame_shift; ++n) {
    double s = 0.0;
    for (int m = n; m < frame_length; m += frame_shift) s += w[m] * w[m];
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  SFVOC_CHECK(lo > 0.0 && (hi - lo) <= 1e-9 * hi, ErrorCode::kInvalidArgument,
              "window is not constant-overlap-add at this frame_shift");
}

std::vector<double> MakeWindow(const StftConfig &cfg) {
  std::vector<double> w(cfg.frame_length, 1.0);
  if (cfg.window == WindowType::kHannPeriodic) {
    for (int n = 0; n < cfg.frame_length; ++n)
      w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / cfg.frame_length);
  }
  return w;
}

int64_t NumFrames(int64_t num_samples, const StftConfig &cfg) {
  return (num_samples + cfg.frame_shift - 1) / cfg.frame_shift;
}

std::vector<int64_t> PaddedSourceIndex(int64_t num_samples,
                                       const StftConfig &cfg) {
  const int64_t frames = NumFrames(num_samples, cfg);
  const int64_t left = cfg.edge_pad();
  const int64_t total = (frames - 1) * cfg.frame_shift + cfg.frame_length;
  std::vector<int64_t> index(total);
  const int64_t period = 2 * (num_samples - 1);
  for (int64_t i = 0; i < total; ++i) {
    int64_t j = i - left;
    if (num_samples == 1) {
      j = 0;
    } else {
      j %= period;
      if (j < 0) j += period;
      if (j >= num_samples) j = period - j;
    }
    index[i] = j;
  }
  return index;
}

std::vector<double> WindowEnvelope(int64_t num_frames, const StftConfig &cfg) {
  const std::vector<double> w = MakeWindow(cfg);
  const int64_t total = (num_frames - 1) * cfg.frame_shift + cfg.frame_length;
  std::vector<double> env(total, 0.0);
  for (int64_t f = 0; f < num_frames; ++f)
    for (int n = 0; n < cfg.frame_length; ++n)
      env[f * cfg.frame_shift + n] += w[n] * w[n];
  return env;
}

double PhaseOf(const Complex &c) {
  if (c.real() == 0.0 && c.imag() == 0.0) return 0.0;
  double p = std::atan2(c.imag(), c.real());
  if (p <= -std::numbers::pi) p = std::numbers::pi;
  return p;
}

ComplexSpectrogram StftComplex(std::span<const double> samples,
                               const StftConfig &cfg) {
  SFVOC_CHECK(!samples.empty(), ErrorCode::kInvalidArgument,
              "STFT of an empty waveform");
  const int64_t frames = NumFrames(samples.size(), cfg);
  const std::vector<int64_t> src = PaddedSourceIndex(samples.size(), cfg);
  const std::vector<double> w = MakeWindow(cfg);
  const Fft &fft = GetFft(cfg.fft_size);

  ComplexSpectrogram out;
  out.num_frames = frames;
  out.num_bins = cfg.num_bins();
  out.data.resize(frames * out.num_bins);
  std::vector<double> buf(cfg.fft_size, 0.0);
  for (int64_t f = 0; f < frames; ++f) {
    const int64_t start = f * cfg.frame_shift;
    for (int n = 0; n < cfg.frame_length; ++n)
      buf[n] = samples[src[start + n]] * w[n];
    fft.Rfft(buf, std::span<Complex>(out.data.data() + f * out.num_bins,
                                     out.num_bins));
  }
  return out;
}

std::vector<double> IstftComplex(const ComplexSpectrogram &spec,
                                 const StftConfig &cfg) {
  SFVOC_CHECK(spec.num_bins == cfg.num_bins(), ErrorCode::kShapeMismatch,
              "spectrogram has " + std::to_string(spec.num_bins) +
                  " bins, config expects " + std::to_string(cfg.num_bins()));
  SFVOC_CHECK(spec.num_frames >= 1, ErrorCode::kShapeMismatch,
              "ISTFT needs at least one frame");
  const int64_t frames = spec.num_frames;
  const std::vector<double> w = MakeWindow(cfg);
  const std::vector<double> env = WindowEnvelope(frames, cfg);
  const Fft &fft = GetFft(cfg.fft_size);
  std::vector<double> ola(env.size(), 0.0);
  std::vector<double> buf(cfg.fft_size);
  for (int64_t f = 0; f < frames; ++f) {
    fft.Irfft(std::span<const Complex>(spec.data.data() + f * spec.num_bins,
                                       spec.num_bins),
              buf);
    const int64_t start = f * cfg.frame_shift;
    for (int n = 0; n < cfg.frame_length; ++n) ola[start + n] += buf[n] * w[n];
  }
  const int64_t left = cfg.edge_pad();
  std::vector<double> out(frames * cfg.frame_shift);
  for (size_t t = 0; t < out.size(); ++t) {
    const double e = env[left + t];
    SFVOC_CHECK(e > 1e-11, ErrorCode::kInvalidArgument,
                "zero window sum inside the output span");
    out[t] = ola[left + t] / e;
  }
  return out;
}

SpectralPair Stft(const Waveform &wave, const StftConfig &cfg) {
  SFVOC_CHECK(wave.sample_rate == cfg.sample_rate, ErrorCode::kRateMismatch,
              "waveform rate " + std::to_string(wave.sample_rate) +
                  " Hz does not match STFT rate " +
                  std::to_string(cfg.sample_rate) + " Hz");
  const ComplexSpectrogram c = StftComplex(wave.samples, cfg);
  SpectralPair out{Tensor({c.num_frames, c.num_bins}),
                   Tensor({c.num_frames, c.num_bins})};
  for (size_t i = 0; i < c.data.size(); ++i) {
    out.amplitude.data[i] = std::abs(c.data[i]);
    out.phase.data[i] = PhaseOf(c.data[i]);
  }
  return out;
}

Waveform Istft(const SpectralPair &spec, const StftConfig &cfg) {
  SFVOC_CHECK(spec.amplitude.shape.size() == 2 &&
                  spec.amplitude.shape == spec.phase.shape,
              ErrorCode::kShapeMismatch,
              "amplitude and phase must be matrices of identical shape");
  ComplexSpectrogram c;
  c.num_frames = spec.amplitude.rows();
  c.num_bins = spec.amplitude.cols();
  c.data.resize(spec.amplitude.size());
  for (size_t i = 0; i < c.data.size(); ++i)
    c.data[i] = spec.amplitude.data[i] *
                Complex(std::cos(spec.phase.data[i]), std::sin(spec.phase.data[i]));
  return Waveform{IstftComplex(c, cfg), cfg.sample_rate};
}

}  // namespace sfvoc
