// src/commands.cc

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

#include "sfvoc/commands.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sfvoc/checkpoint.h"
#include "sfvoc/corpus.h"
#include "sfvoc/error.h"
#include "sfvoc/f0_predictor.h"
#include "sfvoc/plot.h"
#include "sfvoc/wav.h"

namespace sfvoc {

namespace fs = std::filesystem;

namespace {

constexpr char kFeatureFormat[] = "sfvoc-features";
constexpr char kF0PredictorFormat[] = "sfvoc-f0-predictor";

bool EndsWith(const std::string &s, const std::string &suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

nlohmann::json AnalysisMeta(const VocoderConfig &cfg) {
  const nlohmann::json full = VocoderConfigToJson(cfg);
  return {{"stft", full["stft"]}, {"mel", full["mel"]}};
}

F0Sequence ChooseF0(const std::string &source, const Utterance &u,
                    const std::string &model_path) {
  if (source == "natural") return u.f0;
  if (source == "predicted") {
    F0PredictorConfig pcfg;
    const ParameterStore params = LoadF0Predictor(model_path, &pcfg);
    const F0Prediction p = PredictF0(u.mel, params, pcfg);
    return CombineF0(p.contour, p.vuv_prob, pcfg.threshold);
  }
  F0Sequence f0 = ReadF0Text(source);
  SFVOC_CHECK(f0.size() == u.f0.size(), ErrorCode::kShapeMismatch,
              source + " has " + std::to_string(f0.size()) + " frames, expected " +
                  std::to_string(u.f0.size()));
  return f0;
}

std::string DefaultF0Model(const std::string &checkpoint, const std::string &given) {
  if (!given.empty()) return given;
  return (fs::path(checkpoint).parent_path() / "f0_predictor").string();
}

// Keeps the header and the rows of steps <= `step`.
void TrimLog(const std::string &path, int64_t step) {
  std::vector<std::string> keep;
  {
    std::ifstream is(path);
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      if (keep.empty()) {
        keep.push_back(line);
        continue;
      }
      if (std::stoll(line.substr(0, line.find(','))) <= step) keep.push_back(line);
    }
  }
  std::ofstream os(path, std::ios::trunc);
  for (const std::string &l : keep) os << l << "\n";
}

}  // namespace

std::vector<std::string> ListWavs(const std::string &dir) {
  SFVOC_CHECK(fs::is_directory(dir), ErrorCode::kIo, "not a directory: " + dir);
  std::vector<std::string> out;
  for (const auto &entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".wav")
      out.push_back(entry.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

Utterance PrepareUtterance(const std::string &wav_path, const VocoderConfig &cfg,
                           const std::optional<std::string> &f0_sidecar) {
  Utterance u;
  u.id = fs::path(wav_path).stem().string();
  u.wave = ReadWav(wav_path, cfg.stft.sample_rate);
  const int64_t frames = u.wave.size() / cfg.stft.frame_shift;
  SFVOC_CHECK(frames >= 1, ErrorCode::kInvalidArgument,
              wav_path + " is shorter than one frame");
  u.wave.samples.resize(frames * cfg.stft.frame_shift);
  u.mel = ComputeMelSpectrogram(u.wave, cfg.stft, cfg.mel);
  if (f0_sidecar) {
    u.f0 = ReadF0Text(*f0_sidecar);
    SFVOC_CHECK(u.f0.size() == frames, ErrorCode::kShapeMismatch,
                *f0_sidecar + " has " + std::to_string(u.f0.size()) +
                    " frames, audio has " + std::to_string(frames));
  } else {
    u.f0 = ExtractF0(u.wave, cfg.stft);
  }
  CheckUtterance(u, cfg);
  return u;
}

void WriteFeatures(const std::string &path, const Utterance &u,
                   const VocoderConfig &cfg) {
  CheckUtterance(u, cfg);
  Container c;
  c.meta = AnalysisMeta(cfg);
  c.meta["format"] = kFeatureFormat;
  c.meta["id"] = u.id;
  c.arrays["wave"] = Tensor({u.wave.size()}, u.wave.samples);
  c.arrays["f0"] = Tensor({u.f0.size()}, u.f0.values);
  c.arrays["mel"] = u.mel.values;
  WriteContainer(path, c);
}

Utterance ReadFeatures(const std::string &path, const VocoderConfig &cfg) {
  const Container c = ReadContainer(path);
  SFVOC_CHECK(c.meta.value("format", std::string()) == kFeatureFormat,
              ErrorCode::kCorrupt, path + " is not a feature file");
  const nlohmann::json expected = AnalysisMeta(cfg);
  SFVOC_CHECK(c.meta["stft"] == expected["stft"] && c.meta["mel"] == expected["mel"],
              ErrorCode::kConfigMismatch,
              path + " was prepared with different analysis settings");
  for (const char *name : {"wave", "f0", "mel"})
    SFVOC_CHECK(c.arrays.count(name), ErrorCode::kCorrupt,
                path + " lacks array " + name);
  Utterance u;
  u.id = c.meta.value("id", fs::path(path).stem().string());
  u.wave.samples = c.arrays.at("wave").data;
  u.wave.sample_rate = cfg.stft.sample_rate;
  u.f0.values = c.arrays.at("f0").data;
  u.mel.values = c.arrays.at("mel");
  CheckUtterance(u, cfg);
  return u;
}

std::vector<Utterance> LoadFeatureDir(const std::string &dir, const VocoderConfig &cfg) {
  SFVOC_CHECK(fs::is_directory(dir), ErrorCode::kIo, "not a directory: " + dir);
  std::vector<std::string> paths;
  for (const auto &entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".feat")
      paths.push_back(entry.path().string());
  std::sort(paths.begin(), paths.end());
  SFVOC_CHECK(!paths.empty(), ErrorCode::kInvalidArgument,
              "no .feat files in " + dir + " (run prepare first)");
  std::vector<Utterance> out;
  for (const std::string &p : paths) out.push_back(ReadFeatures(p, cfg));
  return out;
}

int CmdPrepare(const ProjectConfig &cfg) {
  cfg.Validate();
  const std::vector<std::string> wavs = ListWavs(cfg.data.wav_dir);
  SFVOC_CHECK(!wavs.empty(), ErrorCode::kInvalidArgument,
              "no .wav files in " + cfg.data.wav_dir);
  fs::create_directories(cfg.data.feature_dir);
  for (const std::string &w : wavs) {
    std::optional<std::string> sidecar;
    if (cfg.data.f0_import == "sidecar")
      sidecar = fs::path(w).replace_extension(".f0").string();
    const Utterance u = PrepareUtterance(w, cfg.vocoder, sidecar);
    WriteFeatures((fs::path(cfg.data.feature_dir) / (u.id + ".feat")).string(), u,
                  cfg.vocoder);
  }
  return static_cast<int>(wavs.size());
}

int64_t CmdTrain(const ProjectConfig &cfg, const TrainOptions &opts) {
  cfg.Validate();
  Trainer trainer(cfg.vocoder, cfg.train, LoadFeatureDir(cfg.data.feature_dir, cfg.vocoder));
  trainer.set_dump_dir(cfg.data.ckpt_dir);
  fs::create_directories(cfg.data.ckpt_dir);
  if (const auto latest = LatestCheckpoint(cfg.data.ckpt_dir)) {
    trainer.Load(*latest);
    if (!opts.quiet) std::cerr << "resuming from " << *latest << "\n";
  }
  const std::string log_path = (fs::path(cfg.data.ckpt_dir) / "train_log.csv").string();
  if (fs::exists(log_path)) {
    TrimLog(log_path, trainer.step());
  } else {
    std::ofstream(log_path) << StepReportCsvHeader() << "\n";
  }
  std::ofstream log(log_path, std::ios::app);
  SFVOC_CHECK(log.good(), ErrorCode::kIo, "cannot append to " + log_path);

  const int64_t max_steps = opts.max_steps.value_or(cfg.train.max_steps);
  int64_t saved_at = trainer.step();
  while (trainer.step() < max_steps) {
    const StepReport r = trainer.Step();
    log << StepReportCsvRow(r) << "\n";
    log.flush();
    if (!opts.quiet && (r.step % 50 == 0 || r.step == 1))
      std::cerr << "step " << r.step << " L_G " << r.loss_g << " L_D " << r.loss_d
                << " mel " << r.mel_loss << "\n";
    if (r.step % cfg.train.checkpoint_every == 0) {
      SaveCheckpointDir(trainer, cfg.data.ckpt_dir);
      saved_at = r.step;
    }
  }
  if (saved_at != trainer.step() || !LatestCheckpoint(cfg.data.ckpt_dir))
    SaveCheckpointDir(trainer, cfg.data.ckpt_dir);
  return trainer.step();
}

void SaveF0Predictor(const std::string &path, const F0PredictorConfig &cfg,
                     const ParameterStore &params) {
  Container c;
  c.meta["format"] = kF0PredictorFormat;
  c.meta["config"] = F0PredictorConfigToJson(cfg);
  for (const auto &[name, node] : params.entries())
    if (name.starts_with("f0/")) c.arrays[name] = node->value;
  WriteContainer(path, c);
}

ParameterStore LoadF0Predictor(const std::string &path, F0PredictorConfig *cfg) {
  const Container c = ReadContainer(path);
  SFVOC_CHECK(c.meta.value("format", std::string()) == kF0PredictorFormat,
              ErrorCode::kCorrupt, path + " is not an F0 predictor file");
  *cfg = F0PredictorConfigFromJson(c.meta["config"]);
  cfg->Validate();
  ParameterStore expected, out;
  InitF0PredictorParameters(*cfg, 0, &expected);
  for (const auto &[name, node] : expected.entries()) {
    auto it = c.arrays.find(name);
    SFVOC_CHECK(it != c.arrays.end() && it->second.shape == node->value.shape,
                ErrorCode::kConfigMismatch, path + ": bad or missing " + name);
    out.Add(name, it->second);
  }
  return out;
}

double CmdTrainF0(const ProjectConfig &cfg) {
  cfg.Validate();
  std::vector<F0TrainingExample> data;
  for (Utterance &u : LoadFeatureDir(cfg.data.feature_dir, cfg.vocoder))
    data.push_back({std::move(u.mel), std::move(u.f0)});
  ParameterStore params;
  InitF0PredictorParameters(cfg.f0_predictor, cfg.train.seed, &params);
  const std::vector<double> losses =
      TrainF0Predictor(data, cfg.f0_predictor, cfg.train.f0_predictor_steps,
                       cfg.train.f0_predictor_learning_rate, cfg.train.seed, &params);
  fs::create_directories(cfg.data.ckpt_dir);
  SaveF0Predictor((fs::path(cfg.data.ckpt_dir) / "f0_predictor").string(),
                  cfg.f0_predictor, params);
  return losses.empty() ? 0.0 : losses.back();
}

void WritePredictedF0(const std::string &path, const F0Sequence &f0) {
  std::ofstream os(path);
  SFVOC_CHECK(os.good(), ErrorCode::kIo, "cannot write " + path);
  char buf[64];
  for (double v : f0.values) {
    std::snprintf(buf, sizeof(buf), "%.17g %d\n", v, v > 0 ? 1 : 0);
    os << buf;
  }
}

std::string ResolveCheckpoint(const std::string &path) {
  if (fs::is_directory(path)) {
    const auto latest = LatestCheckpoint(path);
    SFVOC_CHECK(latest.has_value(), ErrorCode::kIo, "no checkpoint in " + path);
    return *latest;
  }
  return path;
}

Waveform CmdSynth(const ProjectConfig &cfg, const SynthOptions &opts) {
  SFVOC_CHECK(!opts.input.empty() && !opts.output.empty(), ErrorCode::kInvalidArgument,
              "synth needs an input and an output path");
  const std::string ckpt = ResolveCheckpoint(
      opts.checkpoint.empty() ? cfg.data.ckpt_dir : opts.checkpoint);
  const LoadedVocoder voc = LoadVocoder(ckpt);
  const Utterance u = EndsWith(opts.input, ".feat")
                          ? ReadFeatures(opts.input, voc.config)
                          : PrepareUtterance(opts.input, voc.config, std::nullopt);
  const F0Sequence f0 = ChooseF0(opts.f0, u, DefaultF0Model(ckpt, opts.f0_model));
  const Waveform out = Synthesize(f0, u.mel, voc.params, voc.config,
                                  opts.ablation.value_or(voc.train.ablation));
  WriteWav(opts.output, out);
  if (!opts.f0_out.empty()) WritePredictedF0(opts.f0_out, f0);
  return out;
}

MetricReport CmdEval(const ProjectConfig &cfg, const EvalOptions &opts) {
  const std::string ckpt = ResolveCheckpoint(
      opts.checkpoint.empty() ? cfg.data.ckpt_dir : opts.checkpoint);
  const LoadedVocoder voc = LoadVocoder(ckpt);
  const std::vector<std::string> wavs = ListWavs(opts.test_dir);
  SFVOC_CHECK(!wavs.empty(), ErrorCode::kInvalidArgument,
              "test set " + opts.test_dir + " is empty");
  MetricReport report;
  for (const std::string &w : wavs) {
    const Utterance u = PrepareUtterance(w, voc.config, std::nullopt);
    const F0Sequence f0 = ChooseF0(opts.f0, u, DefaultF0Model(ckpt, opts.f0_model));
    const auto t0 = std::chrono::steady_clock::now();
    const Waveform out = Synthesize(f0, u.mel, voc.params, voc.config, voc.train.ablation);
    const double gen =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    UtteranceMetrics m;
    m.id = u.id;
    m.las_rmse_db = LasRmse(out, u.wave, voc.config.stft);
    m.mcd_db = Mcd(out, u.wave, voc.config.stft, voc.config.mel);
    const F0Sequence synth_f0 = ExtractF0(out, voc.config.stft);
    m.f0_rmse_cents = F0RmseCents(synth_f0, u.f0);
    m.vuv_error_pct = VuvErrorPercent(synth_f0, u.f0);
    m.rtf = RealTimeFactor(gen, u.wave.seconds());
    report.utterances.push_back(m);
    report.generation_seconds += gen;
    report.audio_seconds += u.wave.seconds();
  }
  FinalizeReport(&report);
  if (!opts.out_dir.empty()) {
    fs::create_directories(opts.out_dir);
    std::ofstream(fs::path(opts.out_dir) / "report.csv") << ReportCsv(report);
    std::ofstream(fs::path(opts.out_dir) / "report.json")
        << ReportJson(report).dump(2) << "\n";
  }
  return report;
}

void CmdExcite(const ProjectConfig &cfg, const std::string &f0_path,
               const std::string &out_wav) {
  const F0Sequence f0 = ReadF0Text(f0_path);
  SFVOC_CHECK(f0.size() > 0, ErrorCode::kInvalidArgument, f0_path + " is empty");
  f0.Validate(cfg.vocoder.stft.sample_rate);
  WriteWav(out_wav, MakeExcitation(f0, cfg.vocoder, cfg.train.ablation,
                                   cfg.vocoder.excitation.rng_seed));
}

void CmdPlot(const ProjectConfig &cfg, const std::string &input,
             const std::string &out_png) {
  if (EndsWith(input, ".wav")) {
    PlotSpectrogram(ReadWav(input, cfg.vocoder.stft.sample_rate), cfg.vocoder.stft,
                    out_png);
    return;
  }
  const F0Sequence f0 = ReadF0Text(input);
  SFVOC_CHECK(f0.size() > 0, ErrorCode::kInvalidArgument, input + " is empty");
  f0.Validate(cfg.vocoder.stft.sample_rate);
  const Waveform e = MakeExcitation(f0, cfg.vocoder, AblationMode::kFullExcitation,
                                    cfg.vocoder.excitation.rng_seed);
  PlotSpectrogram(e, cfg.vocoder.stft, out_png);
}

}  // namespace sfvoc
