// include/sfvoc/excitation.h

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

#ifndef SFVOC_EXCITATION_H_
#define SFVOC_EXCITATION_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "sfvoc/stft.h"

namespace sfvoc {

// Frame-level F0 in Hz; 0 marks an unvoiced frame.
struct F0Sequence {
  std::vector<double> values;

  int64_t size() const { return static_cast<int64_t>(values.size()); }
  // Throws unless every value is finite, >= 0 and below Nyquist.
  void Validate(int sample_rate) const;
};

// Sample-level F0, constant over each frame's span.
struct PointF0 {
  std::vector<double> values;

  int64_t size() const { return static_cast<int64_t>(values.size()); }
};

struct ExcitationConfig {
  double alpha = 0.1;
  // Standard deviation of the additive noise on voiced samples.  Zero turns
  // that noise off; unvoiced samples always carry unit-variance noise / 3.
  double sigma = 0.003;
  int sample_rate = 16000;
  uint64_t rng_seed = 0;

  void Validate() const;
  bool operator==(const ExcitationConfig &) const = default;
};

PointF0 UpsampleF0(const F0Sequence &f0, int frame_shift);

// floor((sample_rate / 2) / min voiced F0); nullopt when no frame is voiced.
std::optional<int> HarmonicCount(std::span<const double> f0, int sample_rate);

// Full-harmonic excitation: in voiced samples the sum of all in-band
// harmonics of one utterance-wide cumulative phase plus N(0, sigma^2) noise,
// in unvoiced samples Gaussian noise with standard deviation 1/3.  Harmonics
// above Nyquist at the current F0 are muted.  One Gaussian draw is consumed
// per sample in order, so the output is a pure function of (f0, cfg).
Waveform ProduceExcitation(const PointF0 &f0, const ExcitationConfig &cfg);

// Same length and RMS as the full excitation, but pure Gaussian noise.
Waveform ProduceNoiseExcitation(const PointF0 &f0, const ExcitationConfig &cfg);

inline SpectralPair ExcitationSpectra(const Waveform &excitation,
                                      const StftConfig &cfg) {
  return Stft(excitation, cfg);
}

}  // namespace sfvoc

#endif  // SFVOC_EXCITATION_H_
