// include/sfvoc/config.h

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

#ifndef SFVOC_CONFIG_H_
#define SFVOC_CONFIG_H_

#include <cstdint>
#include <string>

#include "json.hpp"
#include "sfvoc/discriminators.h"
#include "sfvoc/excitation.h"
#include "sfvoc/f0_predictor.h"
#include "sfvoc/losses.h"
#include "sfvoc/mel.h"
#include "sfvoc/neural_filter.h"
#include "sfvoc/stft.h"

namespace sfvoc {

enum class AblationMode { kFullExcitation, kNoiseOnly };

std::string AblationName(AblationMode mode);  // "full" / "noise"
AblationMode ParseAblation(const std::string &name);

// Everything that shapes the vocoder's parameters or its signal path.
struct VocoderConfig {
  StftConfig stft;
  MelConfig mel;
  ExcitationConfig excitation;
  FilterConfig filter;
  MpdConfig mpd;
  MrdConfig mrd;
  LossWeights loss;

  // Component checks plus cross-component consistency (bin counts, rates).
  void Validate() const;
  bool operator==(const VocoderConfig &) const = default;
};

struct TrainConfig {
  double learning_rate = 2e-4;
  double beta1 = 0.8;
  double beta2 = 0.99;
  double weight_decay = 0.01;
  double lr_decay_per_epoch = 0.999;
  int batch_size = 16;
  int segment_frames = 64;
  int64_t max_steps = 1000000;
  uint64_t seed = 1234;
  AblationMode ablation = AblationMode::kFullExcitation;
  int64_t checkpoint_every = 1000;
  int f0_predictor_steps = 2000;
  double f0_predictor_learning_rate = 1e-3;

  void Validate() const;
  bool operator==(const TrainConfig &) const = default;
};

struct DataConfig {
  std::string wav_dir = "data/wav";
  std::string feature_dir = "data/features";
  std::string ckpt_dir = "ckpt";
  std::string f0_import = "extract";  // "extract" or "sidecar"

  void Validate() const;
  bool operator==(const DataConfig &) const = default;
};

struct ProjectConfig {
  VocoderConfig vocoder;
  TrainConfig train;
  F0PredictorConfig f0_predictor;
  DataConfig data;

  void Validate() const;
  bool operator==(const ProjectConfig &) const = default;
};

// "full" is the full-size model; "desk" shrinks widths and batches so that
// training runs on one CPU core.
ProjectConfig PresetConfig(const std::string &name);

nlohmann::json VocoderConfigToJson(const VocoderConfig &c);
VocoderConfig VocoderConfigFromJson(const nlohmann::json &j);
nlohmann::json TrainConfigToJson(const TrainConfig &c);
TrainConfig TrainConfigFromJson(const nlohmann::json &j);
nlohmann::json F0PredictorConfigToJson(const F0PredictorConfig &c);
F0PredictorConfig F0PredictorConfigFromJson(const nlohmann::json &j);

// Unknown keys are rejected; absent keys keep the values of `base`.  The
// optional top-level "preset" key selects the base instead.
nlohmann::json ProjectConfigToJson(const ProjectConfig &c);
ProjectConfig ProjectConfigFromJson(const nlohmann::json &j,
                                    const ProjectConfig &base = {});
ProjectConfig LoadProjectConfig(const std::string &path);

}  // namespace sfvoc

#endif  // SFVOC_CONFIG_H_
