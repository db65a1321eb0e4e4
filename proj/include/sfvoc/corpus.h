// include/sfvoc/corpus.h

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

#ifndef SFVOC_CORPUS_H_
#define SFVOC_CORPUS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "sfvoc/excitation.h"
#include "sfvoc/stft.h"

namespace sfvoc {

// Speech-like test material: voiced stretches with a drifting F0 driving a
// harmonic source through three formant resonators, separated by filtered
// noise bursts and short pauses.
struct SyntheticUtterance {
  Waveform wave;  // length is a multiple of frame_shift
  F0Sequence f0;  // true F0 at each frame centre, 0 when unvoiced
};

SyntheticUtterance SynthesizeUtterance(double seconds, uint64_t seed,
                                       const StftConfig &stft);

// Writes utt_000.wav, utt_000.f0, ... into `dir` (created if needed).
// Returns the wav paths.
std::vector<std::string> WriteSyntheticCorpus(const std::string &dir, int count,
                                              double seconds, uint64_t seed,
                                              const StftConfig &stft);

void WriteF0Text(const std::string &path, const F0Sequence &f0);
F0Sequence ReadF0Text(const std::string &path);

}  // namespace sfvoc

#endif  // SFVOC_CORPUS_H_
