// include/sfvoc/f0_extract.h

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

#ifndef SFVOC_F0_EXTRACT_H_
#define SFVOC_F0_EXTRACT_H_

#include "sfvoc/excitation.h"
#include "sfvoc/stft.h"

namespace sfvoc {

// Normalized cross-correlation pitch tracker.  One estimate per analysis
// frame, centred on sample f * frame_shift + frame_shift / 2.
struct F0ExtractConfig {
  double min_hz = 65.0;
  double max_hz = 500.0;
  int window = 512;
  double voicing_threshold = 0.5;  // minimum correlation at the chosen lag
  double relative_energy_floor = 0.01;
  double absolute_energy_floor = 1e-4;

  void Validate(int sample_rate) const;
};

F0Sequence ExtractF0(const Waveform &wave, const StftConfig &stft,
                     const F0ExtractConfig &cfg = {});

}  // namespace sfvoc

#endif  // SFVOC_F0_EXTRACT_H_
