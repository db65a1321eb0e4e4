// include/sfvoc/mel.h

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

#ifndef SFVOC_MEL_H_
#define SFVOC_MEL_H_

#include "sfvoc/stft.h"
#include "sfvoc/tensor.h"

namespace sfvoc {

struct MelConfig {
  int num_mels = 80;
  double fmin = 0.0;
  double fmax = 8000.0;
  double log_floor = 1e-5;

  void Validate(int sample_rate) const;
  bool operator==(const MelConfig &) const = default;
};

// F x M matrix of natural-log mel energies.
struct MelSpectrogram {
  Tensor values;

  int64_t num_frames() const { return values.rows(); }
  int64_t num_mels() const { return values.cols(); }
};

double HzToMel(double hz);
double MelToHz(double mel);

// Triangular filters on the HTK mel scale, M x N.
Tensor MelFilterbank(const StftConfig &stft, const MelConfig &mel);

// log(max(filterbank . amplitude, floor)) for each frame.
MelSpectrogram MelFromAmplitude(const Tensor &amplitude, const Tensor &filterbank,
                                double log_floor);

MelSpectrogram ComputeMelSpectrogram(const Waveform &wave,
                                     const StftConfig &stft,
                                     const MelConfig &mel);

}  // namespace sfvoc

#endif  // SFVOC_MEL_H_
