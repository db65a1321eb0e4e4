// include/sfvoc/wav.h

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

#ifndef SFVOC_WAV_H_
#define SFVOC_WAV_H_

#include <optional>
#include <string>

#include "sfvoc/stft.h"

namespace sfvoc {

// Reads a RIFF/WAVE file holding 16-bit signed PCM mono audio.  When
// `expected_rate` is set, a file at another rate is rejected (no resampling).
Waveform ReadWav(const std::string &path,
                 std::optional<int> expected_rate = std::nullopt);

// Writes 16-bit PCM mono.  Samples are clipped to [-1, 1].
void WriteWav(const std::string &path, const Waveform &wave);

}  // namespace sfvoc

#endif  // SFVOC_WAV_H_
