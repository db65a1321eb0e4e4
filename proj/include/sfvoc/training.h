// include/sfvoc/training.h

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

#ifndef SFVOC_TRAINING_H_
#define SFVOC_TRAINING_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sfvoc/config.h"
#include "sfvoc/excitation.h"
#include "sfvoc/mel.h"
#include "sfvoc/optimizer.h"
#include "sfvoc/params.h"

namespace sfvoc {

// One prepared utterance: waveform trimmed to F * frame_shift samples with
// frame-aligned F0 and mel.
struct Utterance {
  std::string id;
  Waveform wave;
  F0Sequence f0;
  MelSpectrogram mel;
};

// Checks the alignment law T = F * frame_shift for f0 and mel.
void CheckUtterance(const Utterance &u, const VocoderConfig &cfg);

// Excitation for `f0` in the given mode, with its noise seeded by `seed`.
Waveform MakeExcitation(const F0Sequence &f0, const VocoderConfig &cfg,
                        AblationMode mode, uint64_t seed);

struct GeneratorOutput {
  Var wave;  // [F * frame_shift]
  Var amplitude, phase;
};

// Excitation -> STFT -> neural filter -> ISTFT, recorded on the tape when
// gradients are enabled.
GeneratorOutput Generate(const Waveform &excitation, const Tensor &mel,
                         const ParameterStore &params, const VocoderConfig &cfg);

Waveform Synthesize(const F0Sequence &f0, const MelSpectrogram &mel,
                    const ParameterStore &params, const VocoderConfig &cfg,
                    AblationMode mode = AblationMode::kFullExcitation);

double LearningRateAt(const TrainConfig &cfg, int64_t epoch);

struct StepReport {
  int64_t step = 0;  // 1-based index of the finished step
  double learning_rate = 0;
  double loss_g = 0, loss_d = 0, mel_loss = 0;
  double mpd_adv_g = 0, mpd_fm = 0, mrd_adv_g = 0, mrd_fm = 0;
  double mpd_adv_d = 0, mrd_adv_d = 0;
};

std::string StepReportCsvHeader();
std::string StepReportCsvRow(const StepReport &r);

class Trainer {
 public:
  Trainer(VocoderConfig vocoder, TrainConfig train, std::vector<Utterance> data);

  // One discriminator update on the discriminator objective followed by one
  // generator update on the generator objective.
  StepReport Step();

  int64_t step() const { return step_; }
  int64_t StepsPerEpoch() const;
  double CurrentLearningRate() const;

  // Mean mel loss over the full utterances at the current parameters.
  double EvalMelLoss() const;

  void Save(const std::string &path) const;
  // Rejects checkpoints whose vocoder configuration differs from ours.
  void Load(const std::string &path);

  // Where to write a state dump if a loss turns non-finite.
  void set_dump_dir(std::string dir) { dump_dir_ = std::move(dir); }

  // Called inside Step() after the discriminator update ("discriminator")
  // and after the generator update ("generator").
  using PhaseHook = std::function<void(const std::string &phase)>;
  void set_phase_hook(PhaseHook hook) { phase_hook_ = std::move(hook); }

  ParameterStore &params() { return params_; }
  const ParameterStore &params() const { return params_; }
  const VocoderConfig &vocoder_config() const { return vocoder_; }
  const TrainConfig &train_config() const { return train_; }

 private:
  struct Crop {
    const Utterance *utt;
    int64_t first_frame, num_frames;
    uint64_t noise_seed;
  };
  std::vector<Crop> SampleBatch(int64_t step) const;
  [[noreturn]] void FailNonFinite(const std::string &what) const;

  VocoderConfig vocoder_;
  TrainConfig train_;
  std::vector<Utterance> data_;
  ParameterStore params_;
  AdamW optimizer_;
  Tensor filterbank_;
  int64_t step_ = 0;
  std::string dump_dir_;
  PhaseHook phase_hook_;
};

// Writes <dir>/step_<n> and points <dir>/latest at it.
std::string SaveCheckpointDir(const Trainer &trainer, const std::string &dir);
// Path named by <dir>/latest, if any.
std::optional<std::string> LatestCheckpoint(const std::string &dir);

struct LoadedVocoder {
  VocoderConfig config;
  TrainConfig train;
  ParameterStore params;
  int64_t step = 0;
};
LoadedVocoder LoadVocoder(const std::string &path);

}  // namespace sfvoc

#endif  // SFVOC_TRAINING_H_
