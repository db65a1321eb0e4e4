// include/sfvoc/discriminators.h

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

#ifndef SFVOC_DISCRIMINATORS_H_
#define SFVOC_DISCRIMINATORS_H_

#include <cstdint>
#include <vector>

#include "sfvoc/ops.h"
#include "sfvoc/params.h"
#include "sfvoc/stft.h"

namespace sfvoc {

// Multi-period discriminator: one sub-discriminator per period.  Each folds
// the waveform to [T/p, p], runs one (k x 1) conv + leaky ReLU per entry of
// `channels`, then a (3 x 1) conv to one score channel.
struct MpdConfig {
  std::vector<int> periods{2, 3, 5, 7, 11};
  std::vector<int> channels{32, 128, 512, 1024, 1024};
  std::vector<int> strides{3, 3, 3, 3, 1};
  int kernel = 5;
  double leaky_slope = 0.1;

  void Validate() const;
  bool operator==(const MpdConfig &) const = default;
};

// Multi-resolution discriminator over linear amplitude spectrograms at half,
// base and double the analysis resolution.  Six conv + leaky ReLU blocks
// (the middle four strided by 2 along frequency) and a conv output layer.
struct MrdConfig {
  StftConfig base;
  int channels = 32;
  double leaky_slope = 0.1;

  std::vector<StftConfig> Resolutions() const;
  void Validate() const;
  bool operator==(const MrdConfig &) const = default;
};

inline constexpr int kMrdBlocks = 6;

struct DiscriminatorOutput {
  Var score;
  std::vector<Var> features;  // stage activations followed by the score
};

using DiscriminatorOutputs = std::vector<DiscriminatorOutput>;

void InitMpdParameters(const MpdConfig &cfg, uint64_t seed, ParameterStore *params);
void InitMrdParameters(const MrdConfig &cfg, uint64_t seed, ParameterStore *params);

// Waveform [T] folded to [ceil(T / period), period] after right reflect
// padding.  Returned as a plain matrix.
Tensor PeriodReshape(std::span<const double> samples, int period);

DiscriminatorOutputs MpdForward(const Var &wave, const ParameterStore &params,
                                const MpdConfig &cfg);
DiscriminatorOutputs MrdForward(const Var &wave, const ParameterStore &params,
                                const MrdConfig &cfg);

}  // namespace sfvoc

#endif  // SFVOC_DISCRIMINATORS_H_
