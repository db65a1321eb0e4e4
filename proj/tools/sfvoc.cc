// tools/sfvoc.cc

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

// Command-line front end: prepare, train, train-f0, synth, eval, excite, plot,
// dump-config, make-corpus.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sfvoc/commands.h"
#include "sfvoc/corpus.h"
#include "sfvoc/error.h"
#include "sfvoc/runtime.h"

namespace {

void PrintError(const std::string &code, const std::string &message) {
  std::cerr << nlohmann::json{{"error", code}, {"message", message}}.dump() << "\n";
}

}  // namespace

int main(int argc, char **argv) {
  sfvoc::TuneAllocator();
  CLI::App app{"Source-filter neural vocoder"};
  app.require_subcommand(1);

  std::string config_path, preset = "full", ablation;
  std::optional<uint64_t> seed;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--preset", preset, "base preset when no config is given")
      ->check(CLI::IsMember({"full", "desk"}));
  app.add_option("--seed", seed, "override train.seed");
  app.add_option("--ablation", ablation, "excitation mode")
      ->check(CLI::IsMember({"full", "noise"}));

  auto *prepare = app.add_subcommand("prepare", "extract mel and F0 features");
  std::string wav_dir, feature_dir;
  prepare->add_option("--wav-dir", wav_dir, "override data.wav_dir");
  prepare->add_option("--feature-dir", feature_dir, "override data.feature_dir");

  auto *train = app.add_subcommand("train", "train or resume the vocoder");
  std::optional<int64_t> steps;
  train->add_option("--steps", steps, "stop after this many total steps");

  auto *train_f0 = app.add_subcommand("train-f0", "train the F0 predictor");

  auto *synth = app.add_subcommand("synth", "synthesize a waveform");
  sfvoc::SynthOptions synth_opts;
  synth->add_option("--checkpoint", synth_opts.checkpoint,
                    "checkpoint file or directory (default data.ckpt_dir)");
  synth->add_option("--input", synth_opts.input, ".feat or .wav input")->required();
  synth->add_option("--output", synth_opts.output, "output wav")->required();
  synth->add_option("--f0", synth_opts.f0, "natural, predicted or an F0 text file");
  synth->add_option("--f0-model", synth_opts.f0_model, "F0 predictor file");
  synth->add_option("--f0-out", synth_opts.f0_out, "write the F0 used as text");

  auto *eval = app.add_subcommand("eval", "objective metrics on a test set");
  sfvoc::EvalOptions eval_opts;
  eval->add_option("--checkpoint", eval_opts.checkpoint, "checkpoint file or directory");
  eval->add_option("--test-dir", eval_opts.test_dir, "directory of wavs")->required();
  eval->add_option("--out-dir", eval_opts.out_dir, "where report.csv/json go")
      ->required();
  eval->add_option("--f0", eval_opts.f0, "natural, predicted or an F0 text file");
  eval->add_option("--f0-model", eval_opts.f0_model, "F0 predictor file");

  auto *excite = app.add_subcommand("excite", "render the excitation for an F0 file");
  std::string f0_file, out_path;
  excite->add_option("f0_file", f0_file)->required();
  excite->add_option("out_wav", out_path)->required();

  auto *plot = app.add_subcommand("plot", "log-amplitude spectrogram as PNG");
  std::string plot_input;
  plot->add_option("input", plot_input, ".wav or F0 text file")->required();
  plot->add_option("out_png", out_path)->required();

  auto *dump = app.add_subcommand("dump-config", "print the effective configuration");

  auto *corpus = app.add_subcommand("make-corpus", "write synthetic speech-like wavs");
  std::string corpus_dir;
  int corpus_count = 8;
  double corpus_seconds = 1.0;
  corpus->add_option("dir", corpus_dir)->required();
  corpus->add_option("--count", corpus_count);
  corpus->add_option("--seconds", corpus_seconds);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    PrintError("invalid_argument", e.what());
    return 2;
  }

  try {
    sfvoc::ProjectConfig cfg = config_path.empty()
                                   ? sfvoc::PresetConfig(preset)
                                   : sfvoc::LoadProjectConfig(config_path);
    if (seed) cfg.train.seed = *seed;
    if (!ablation.empty()) cfg.train.ablation = sfvoc::ParseAblation(ablation);
    if (!wav_dir.empty()) cfg.data.wav_dir = wav_dir;
    if (!feature_dir.empty()) cfg.data.feature_dir = feature_dir;
    cfg.Validate();

    if (*prepare) {
      std::cout << "prepared " << sfvoc::CmdPrepare(cfg) << " utterances\n";
    } else if (*train) {
      sfvoc::TrainOptions opts;
      opts.max_steps = steps;
      std::cout << "trained to step " << sfvoc::CmdTrain(cfg, opts) << "\n";
    } else if (*train_f0) {
      std::cout << "f0 predictor final loss " << sfvoc::CmdTrainF0(cfg) << "\n";
    } else if (*synth) {
      if (!ablation.empty()) synth_opts.ablation = cfg.train.ablation;
      const sfvoc::Waveform w = sfvoc::CmdSynth(cfg, synth_opts);
      std::cout << "wrote " << w.size() << " samples to " << synth_opts.output << "\n";
    } else if (*eval) {
      const sfvoc::MetricReport r = sfvoc::CmdEval(cfg, eval_opts);
      std::cout << sfvoc::ReportCsv(r);
    } else if (*excite) {
      sfvoc::CmdExcite(cfg, f0_file, out_path);
    } else if (*plot) {
      sfvoc::CmdPlot(cfg, plot_input, out_path);
    } else if (*dump) {
      std::cout << sfvoc::ProjectConfigToJson(cfg).dump(2) << "\n";
    } else if (*corpus) {
      for (const std::string &p :
           sfvoc::WriteSyntheticCorpus(corpus_dir, corpus_count, corpus_seconds,
                                       cfg.train.seed, cfg.vocoder.stft))
        std::cout << p << "\n";
    }
  } catch (const sfvoc::Error &e) {
    PrintError(std::string(sfvoc::ErrorCodeName(e.code())), e.what());
    return 1;
  } catch (const std::exception &e) {
    PrintError("internal", e.what());
    return 1;
  }
  return 0;
}
