// src/mel.cc

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

#include "sfvoc/mel.h"

#include <algorithm>
#include <cmath>

#include "sfvoc/error.h"

namespace sfvoc {

void MelConfig::Validate(int sample_rate) const {
  SFVOC_CHECK(num_mels >= 1, ErrorCode::kInvalidArgument,
              "num_mels must be >= 1");
  SFVOC_CHECK(fmin >= 0.0 && fmin < fmax && fmax <= sample_rate / 2.0,
              ErrorCode::kInvalidArgument,
              "need 0 <= fmin < fmax <= sample_rate / 2");
  SFVOC_CHECK(log_floor > 0.0, ErrorCode::kInvalidArgument,
              "log_floor must be positive");
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

Tensor MelFilterbank(const StftConfig &stft, const MelConfig &mel) {
  stft.Validate();
  mel.Validate(stft.sample_rate);
  const int n_bins = stft.num_bins();
  const double lo = HzToMel(mel.fmin), hi = HzToMel(mel.fmax);
  std::vector<double> edges(mel.num_mels + 2);
  for (int i = 0; i < mel.num_mels + 2; ++i)
    edges[i] = MelToHz(lo + (hi - lo) * i / (mel.num_mels + 1));

  Tensor fb({mel.num_mels, n_bins});
  for (int m = 0; m < mel.num_mels; ++m) {
    const double left = edges[m], centre = edges[m + 1], right = edges[m + 2];
    for (int k = 0; k < n_bins; ++k) {
      const double hz = static_cast<double>(k) * stft.sample_rate / stft.fft_size;
      const double up = (hz - left) / (centre - left);
      const double down = (right - hz) / (right - centre);
      fb.at(m, k) = std::max(0.0, std::min(up, down));
    }
  }
  return fb;
}

MelSpectrogram MelFromAmplitude(const Tensor &amplitude, const Tensor &filterbank,
                                double log_floor) {
  SFVOC_CHECK(amplitude.shape.size() == 2 &&
                  amplitude.cols() == filterbank.cols(),
              ErrorCode::kShapeMismatch, "amplitude/filterbank bin mismatch");
  const int64_t frames = amplitude.rows(), mels = filterbank.rows();
  MelSpectrogram out{Tensor({frames, mels})};
  for (int64_t f = 0; f < frames; ++f) {
    auto a = amplitude.row(f);
    for (int64_t m = 0; m < mels; ++m) {
      auto w = filterbank.row(m);
      double e = 0.0;
      for (size_t k = 0; k < a.size(); ++k) e += w[k] * a[k];
      out.values.at(f, m) = std::log(std::max(e, log_floor));
    }
  }
  return out;
}

MelSpectrogram ComputeMelSpectrogram(const Waveform &wave,
                                     const StftConfig &stft,
                                     const MelConfig &mel) {
  const SpectralPair spec = Stft(wave, stft);
  return MelFromAmplitude(spec.amplitude, MelFilterbank(stft, mel),
                          mel.log_floor);
}

}  // namespace sfvoc
