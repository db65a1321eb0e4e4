// include/sfvoc/stft.h

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

#ifndef SFVOC_STFT_H_
#define SFVOC_STFT_H_

#include <cstdint>
#include <span>
#include <vector>

#include "sfvoc/fft.h"
#include "sfvoc/tensor.h"

namespace sfvoc {

enum class WindowType { kHannPeriodic, kRectangular };

struct StftConfig {
  int frame_length = 640;
  int frame_shift = 160;
  int fft_size = 1024;
  int sample_rate = 16000;
  WindowType window = WindowType::kHannPeriodic;

  int num_bins() const { return fft_size / 2 + 1; }
  // Reflect padding applied on each side before framing.
  int edge_pad() const { return (frame_length - frame_shift) / 2; }

  // Throws kInvalidArgument unless the configuration satisfies the framing and
  // overlap-add constraints.
  void Validate() const;

  bool operator==(const StftConfig &) const = default;
};

struct Waveform {
  std::vector<double> samples;
  int sample_rate = 16000;

  int64_t size() const { return static_cast<int64_t>(samples.size()); }
  double seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Amplitude is linear magnitude, phase is in (-pi, pi]; both F x N.
struct SpectralPair {
  Tensor amplitude;
  Tensor phase;

  int64_t num_frames() const { return amplitude.rows(); }
  int64_t num_bins() const { return amplitude.cols(); }
};

// Complex spectrogram, row-major F x N.
struct ComplexSpectrogram {
  int64_t num_frames = 0;
  int64_t num_bins = 0;
  std::vector<Complex> data;

  Complex &at(int64_t f, int64_t k) { return data[f * num_bins + k]; }
  const Complex &at(int64_t f, int64_t k) const {
    return data[f * num_bins + k];
  }
};

std::vector<double> MakeWindow(const StftConfig &cfg);

// F = ceil(T / frame_shift).
int64_t NumFrames(int64_t num_samples, const StftConfig &cfg);

// Source index for every sample of the padded signal (reflect padding with
// edge_pad() on the left and edge_pad() plus the shortfall to F * shift on
// the right).  Reflection folds repeatedly for very short inputs.
std::vector<int64_t> PaddedSourceIndex(int64_t num_samples,
                                       const StftConfig &cfg);

// Overlap-added squared window over the padded signal span of F frames.
std::vector<double> WindowEnvelope(int64_t num_frames, const StftConfig &cfg);

ComplexSpectrogram StftComplex(std::span<const double> samples,
                               const StftConfig &cfg);
std::vector<double> IstftComplex(const ComplexSpectrogram &spec,
                                 const StftConfig &cfg);

SpectralPair Stft(const Waveform &wave, const StftConfig &cfg);
Waveform Istft(const SpectralPair &spec, const StftConfig &cfg);

// Phase convention shared by every spectral producer: 0 for zero magnitude,
// and -pi folded onto +pi.
double PhaseOf(const Complex &c);

}  // namespace sfvoc

#endif  // SFVOC_STFT_H_
