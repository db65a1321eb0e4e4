// include/sfvoc/f0_predictor.h

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

#ifndef SFVOC_F0_PREDICTOR_H_
#define SFVOC_F0_PREDICTOR_H_

#include <cstdint>
#include <vector>

#include "sfvoc/excitation.h"
#include "sfvoc/mel.h"
#include "sfvoc/ops.h"
#include "sfvoc/params.h"

namespace sfvoc {

// Three parallel 1-D convolutions over frames, concatenated, feeding a V/UV
// head (sigmoid) and a contour head (ReLU, in units of contour_scale_hz).
struct F0PredictorConfig {
  std::vector<int> kernel_sizes{3, 5, 7};
  int conv_channels = 128;
  int head_hidden = 64;
  int mel_bins = 80;
  double contour_scale_hz = 100.0;
  double threshold = 0.5;

  void Validate() const;
  bool operator==(const F0PredictorConfig &) const = default;
};

void InitF0PredictorParameters(const F0PredictorConfig &cfg, uint64_t seed,
                               ParameterStore *params);

struct F0PredictorOutput {
  Var contour;    // [F, 1], Hz, >= 0
  Var vuv_logit;  // [F, 1]
};

F0PredictorOutput F0PredictorForward(const Var &mel, const ParameterStore &params,
                                     const F0PredictorConfig &cfg);

// MAE between log(1 + contour) and log(1 + f0) over voiced target frames plus
// binary cross-entropy of the V/UV logits.
Var F0PredictorLoss(const F0PredictorOutput &out, const F0Sequence &target);

struct F0Prediction {
  std::vector<double> contour;
  std::vector<double> vuv_prob;
};

F0Prediction PredictF0(const MelSpectrogram &mel, const ParameterStore &params,
                       const F0PredictorConfig &cfg);

// contour_t where vuv_prob_t >= threshold, else 0.
F0Sequence CombineF0(std::span<const double> contour,
                     std::span<const double> vuv_prob, double threshold);

struct F0TrainingExample {
  MelSpectrogram mel;
  F0Sequence f0;
};

// Full-utterance AdamW training, one example per step in a seeded shuffled
// order.  Returns the per-step losses.
std::vector<double> TrainF0Predictor(const std::vector<F0TrainingExample> &data,
                                     const F0PredictorConfig &cfg, int steps,
                                     double learning_rate, uint64_t seed,
                                     ParameterStore *params);

}  // namespace sfvoc

#endif  // SFVOC_F0_PREDICTOR_H_
