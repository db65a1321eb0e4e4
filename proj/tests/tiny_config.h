// tests/tiny_config.h

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

#ifndef SFVOC_TESTS_TINY_CONFIG_H_
#define SFVOC_TESTS_TINY_CONFIG_H_

#include <string>
#include <vector>

#include "sfvoc/config.h"
#include "sfvoc/corpus.h"
#include "sfvoc/training.h"

namespace sfvoc::testing {

// A vocoder small enough for many training steps inside a unit test:
// 64-point frames, 8 hidden channels, and a few discriminator channels.
inline VocoderConfig TinyVocoder() {
  VocoderConfig c;
  c.stft.frame_length = 64;
  c.stft.frame_shift = 16;
  c.stft.fft_size = 64;
  c.mel.num_mels = 8;
  c.filter.spec_bins = c.stft.num_bins();
  c.filter.mel_bins = 8;
  c.filter.hidden_dim = 8;
  c.filter.num_blocks = 2;
  c.mpd.channels = {2, 4, 4, 4, 4};
  c.mrd.base = c.stft;
  c.mrd.channels = 2;
  return c;
}

inline TrainConfig TinyTrain() {
  TrainConfig t;
  t.batch_size = 2;
  t.segment_frames = 16;
  t.seed = 77;
  return t;
}

inline std::vector<Utterance> TinyCorpus(const VocoderConfig &cfg, int count,
                                         double seconds, uint64_t seed) {
  std::vector<Utterance> out;
  for (int i = 0; i < count; ++i) {
    SyntheticUtterance s = SynthesizeUtterance(seconds, seed + i, cfg.stft);
    Utterance u;
    u.id = "utt" + std::to_string(i);
    u.mel = ComputeMelSpectrogram(s.wave, cfg.stft, cfg.mel);
    u.wave = std::move(s.wave);
    u.f0 = std::move(s.f0);
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace sfvoc::testing

#endif  // SFVOC_TESTS_TINY_CONFIG_H_
