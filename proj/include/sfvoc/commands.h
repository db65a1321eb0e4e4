// include/sfvoc/commands.h

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

#ifndef SFVOC_COMMANDS_H_
#define SFVOC_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sfvoc/config.h"
#include "sfvoc/evaluation.h"
#include "sfvoc/f0_extract.h"
#include "sfvoc/training.h"

namespace sfvoc {

// Sorted *.wav paths in `dir`.
std::vector<std::string> ListWavs(const std::string &dir);

// Reads `wav_path`, trims it to a multiple of frame_shift and attaches mel and
// F0.  With `f0_sidecar` the F0 comes from that text file and its frame count
// must match; otherwise it is extracted.
Utterance PrepareUtterance(const std::string &wav_path, const VocoderConfig &cfg,
                           const std::optional<std::string> &f0_sidecar);

void WriteFeatures(const std::string &path, const Utterance &u,
                   const VocoderConfig &cfg);
Utterance ReadFeatures(const std::string &path, const VocoderConfig &cfg);
std::vector<Utterance> LoadFeatureDir(const std::string &dir, const VocoderConfig &cfg);

// Writes one <stem>.feat per wav in data.wav_dir into data.feature_dir and
// returns the number of utterances.
int CmdPrepare(const ProjectConfig &cfg);

struct TrainOptions {
  std::optional<int64_t> max_steps;  // overrides train.max_steps
  bool quiet = false;
};
// Trains from scratch or resumes from <ckpt_dir>/latest; appends per-step
// rows to <ckpt_dir>/train_log.csv.  Returns the final step.
int64_t CmdTrain(const ProjectConfig &cfg, const TrainOptions &opts = {});

// Trains the F0 predictor on the prepared features and writes
// <ckpt_dir>/f0_predictor.  Returns the final training loss.
double CmdTrainF0(const ProjectConfig &cfg);

void SaveF0Predictor(const std::string &path, const F0PredictorConfig &cfg,
                     const ParameterStore &params);
ParameterStore LoadF0Predictor(const std::string &path, F0PredictorConfig *cfg);

// Writes `<f0_hz> <vuv>` lines.
void WritePredictedF0(const std::string &path, const F0Sequence &f0);

struct SynthOptions {
  std::string checkpoint;  // file, or a directory holding `latest`
  std::string input;       // .feat feature file or .wav
  std::string f0 = "natural";  // natural | predicted | path to F0 text
  std::string f0_model;    // predictor file for --f0 predicted
  std::string output;
  std::string f0_out;      // optional export of the F0 actually used
  std::optional<AblationMode> ablation;
};
Waveform CmdSynth(const ProjectConfig &cfg, const SynthOptions &opts);

struct EvalOptions {
  std::string checkpoint;
  std::string test_dir;
  std::string out_dir;
  std::string f0 = "natural";
  std::string f0_model;
};
MetricReport CmdEval(const ProjectConfig &cfg, const EvalOptions &opts);

void CmdExcite(const ProjectConfig &cfg, const std::string &f0_path,
               const std::string &out_wav);
// `input` is a wav (its spectrogram) or an F0 text file (the spectrogram of
// the excitation it produces).
void CmdPlot(const ProjectConfig &cfg, const std::string &input,
             const std::string &out_png);

std::string ResolveCheckpoint(const std::string &path);

}  // namespace sfvoc

#endif  // SFVOC_COMMANDS_H_
