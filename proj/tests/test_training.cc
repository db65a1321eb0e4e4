// tests/test_training.cc

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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <random>

#include "doctest.h"
#include "sfvoc/error.h"
#include "sfvoc/excitation.h"
#include "test_util.h"
#include "tiny_config.h"

namespace sfvoc {
namespace {

using testing::TinyCorpus;
using testing::TinyTrain;
using testing::TinyVocoder;

std::string ReadBytes(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(is), {});
}

std::map<std::string, Tensor> Snapshot(const ParameterStore &p, const std::string &prefix) {
  std::map<std::string, Tensor> out;
  for (const std::string &name : p.Names(prefix)) out[name] = p.Get(name).value();
  return out;
}

bool SameParams(const ParameterStore &a, const ParameterStore &b) {
  return Snapshot(a, "") == Snapshot(b, "");
}

TEST_CASE("learning rate follows the per-epoch decay") {
  const TrainConfig t;
  for (int k = 0; k < 50; ++k) {
    CHECK(LearningRateAt(t, k) == doctest::Approx(2e-4 * std::pow(0.999, k)).epsilon(1e-14));
    CHECK(LearningRateAt(t, k + 1) < LearningRateAt(t, k));
  }
  const VocoderConfig v = TinyVocoder();
  TrainConfig tt = TinyTrain();
  tt.batch_size = 1;
  Trainer trainer(v, tt, TinyCorpus(v, 3, 0.1, 1));
  CHECK(trainer.StepsPerEpoch() == 3);
  std::vector<double> lrs;
  for (int i = 0; i < 7; ++i) lrs.push_back(trainer.Step().learning_rate);
  CHECK(lrs[0] == LearningRateAt(tt, 0));
  CHECK(lrs[2] == LearningRateAt(tt, 0));
  CHECK(lrs[3] == LearningRateAt(tt, 1));
  CHECK(lrs[6] == LearningRateAt(tt, 2));
}

TEST_CASE("identical seeds give identical trajectories") {
  const VocoderConfig v = TinyVocoder();
  const auto data = TinyCorpus(v, 2, 0.2, 5);
  Trainer a(v, TinyTrain(), data), b(v, TinyTrain(), data);
  for (int i = 0; i < 4; ++i) {
    const StepReport ra = a.Step(), rb = b.Step();
    CHECK(StepReportCsvRow(ra) == StepReportCsvRow(rb));
    CHECK(ra.loss_g == rb.loss_g);
    CHECK(ra.loss_d == rb.loss_d);
  }
  CHECK(SameParams(a.params(), b.params()));

  TrainConfig other = TinyTrain();
  other.seed = 78;
  Trainer c(v, other, data);
  CHECK(c.Step().loss_g != Trainer(v, TinyTrain(), data).Step().loss_g);
}

TEST_CASE("each update touches only its own parameters") {
  const VocoderConfig v = TinyVocoder();
  Trainer t(v, TinyTrain(), TinyCorpus(v, 2, 0.2, 9));
  for (int i = 0; i < 3; ++i) {
    const auto gen_before = Snapshot(t.params(), "generator/");
    auto mpd_before = Snapshot(t.params(), "mpd/");
    auto mrd_before = Snapshot(t.params(), "mrd/");
    std::vector<std::string> phases;
    t.set_phase_hook([&](const std::string &phase) {
      phases.push_back(phase);
      if (phase == "discriminator") {
        CHECK(Snapshot(t.params(), "generator/") == gen_before);
        CHECK(Snapshot(t.params(), "mpd/") != mpd_before);
        CHECK(Snapshot(t.params(), "mrd/") != mrd_before);
        mpd_before = Snapshot(t.params(), "mpd/");
        mrd_before = Snapshot(t.params(), "mrd/");
      } else {
        CHECK(Snapshot(t.params(), "mpd/") == mpd_before);
        CHECK(Snapshot(t.params(), "mrd/") == mrd_before);
        CHECK(Snapshot(t.params(), "generator/") != gen_before);
      }
    });
    t.Step();
    CHECK(phases == std::vector<std::string>{"discriminator", "generator"});
  }
}

TEST_CASE("checkpoint save, load, save is byte-identical") {
  const std::string dir = testing::TempDir("training_ckpt");
  const VocoderConfig v = TinyVocoder();
  const auto data = TinyCorpus(v, 2, 0.2, 11);
  Trainer a(v, TinyTrain(), data);
  a.Step();
  a.Step();
  a.Save(dir + "/a");
  Trainer b(v, TinyTrain(), data);
  b.Load(dir + "/a");
  CHECK(b.step() == 2);
  b.Save(dir + "/b");
  const std::string bytes = ReadBytes(dir + "/a");
  CHECK(!bytes.empty());
  CHECK(bytes == ReadBytes(dir + "/b"));
  CHECK(SameParams(a.params(), b.params()));

  const LoadedVocoder lv = LoadVocoder(dir + "/a");
  CHECK(lv.step == 2);
  CHECK(lv.config == v);
  CHECK(lv.train == TinyTrain());
}

TEST_CASE("resuming reproduces the uninterrupted trajectory") {
  const std::string dir = testing::TempDir("training_resume");
  const VocoderConfig v = TinyVocoder();
  const auto data = TinyCorpus(v, 3, 0.2, 13);
  Trainer full(v, TinyTrain(), data);
  std::vector<std::string> rows;
  for (int i = 0; i < 5; ++i) {
    rows.push_back(StepReportCsvRow(full.Step()));
    if (i == 2) SaveCheckpointDir(full, dir);
  }
  const auto latest = LatestCheckpoint(dir);
  REQUIRE(latest.has_value());
  CHECK(std::filesystem::path(*latest).filename() == "step_3");
  Trainer resumed(v, TinyTrain(), data);
  resumed.Load(*latest);
  CHECK(StepReportCsvRow(resumed.Step()) == rows[3]);
  CHECK(StepReportCsvRow(resumed.Step()) == rows[4]);
  CHECK(SameParams(resumed.params(), full.params()));
}

TEST_CASE("loading rejects mismatched or damaged checkpoints") {
  const std::string dir = testing::TempDir("training_reject");
  const VocoderConfig v = TinyVocoder();
  const auto data = TinyCorpus(v, 1, 0.2, 15);
  Trainer a(v, TinyTrain(), data);
  a.Save(dir + "/ckpt");

  VocoderConfig wider = v;
  wider.filter.hidden_dim = 12;
  Trainer b(wider, TinyTrain(), data);
  try {
    b.Load(dir + "/ckpt");
    FAIL("mismatched filter config was accepted");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kConfigMismatch);
  }

  std::string bytes = ReadBytes(dir + "/ckpt");
  auto write = [&](const std::string &name, const std::string &content) {
    std::ofstream os(dir + "/" + name, std::ios::binary);
    os << content;
    return dir + "/" + name;
  };
  std::string flipped = bytes;
  flipped[bytes.size() / 2] ^= 0x40;
  std::string version = bytes;
  version[8] = 99;
  auto code_of = [&](const std::string &path) {
    try {
      Trainer(v, TinyTrain(), data).Load(path);
    } catch (const Error &e) {
      return e.code();
    }
    return ErrorCode::kConfig;
  };
  CHECK(code_of(write("flipped", flipped)) == ErrorCode::kCorrupt);
  CHECK(code_of(write("version", version)) == ErrorCode::kVersionMismatch);
  CHECK(code_of(write("short", bytes.substr(0, 40))) == ErrorCode::kCorrupt);
  CHECK(code_of(dir + "/missing") == ErrorCode::kIo);
}

TEST_CASE("a non-finite loss aborts with a state dump") {
  const std::string dir = testing::TempDir("training_nonfinite");
  const VocoderConfig v = TinyVocoder();
  Trainer t(v, TinyTrain(), TinyCorpus(v, 1, 0.2, 17));
  t.set_dump_dir(dir);
  t.params().Get("mpd/p2/out/bias").mutable_value().data[0] = INFINITY;
  try {
    t.Step();
    FAIL("expected a non-finite failure");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kNonFinite);
  }
  CHECK(std::filesystem::exists(dir + "/nonfinite_step_0"));
  CHECK(t.step() == 0);
}

TEST_CASE("trainer validates its data") {
  const VocoderConfig v = TinyVocoder();
  auto data = TinyCorpus(v, 1, 0.2, 19);
  data[0].wave.samples.pop_back();
  CHECK_THROWS_AS(Trainer(v, TinyTrain(), data), Error);
  data = TinyCorpus(v, 1, 0.2, 19);
  data[0].mel.values = Tensor({3, 8});
  CHECK_THROWS_AS(Trainer(v, TinyTrain(), data), Error);
  CHECK_THROWS_AS(Trainer(v, TinyTrain(), {}), Error);
  // Seven frames are shorter than the resolution discriminator needs.
  data = TinyCorpus(v, 1, 7 * 16 / 16000.0, 19);
  REQUIRE(data[0].f0.size() == 7);
  CHECK_THROWS_AS(Trainer(v, TinyTrain(), data), Error);
}

// Average periodogram of Hann-windowed 1024-sample blocks, by direct DFT.
std::vector<double> AveragePeriodogram(const std::vector<double> &x) {
  const int n = 1024;
  std::vector<double> acc(n / 2 + 1, 0.0);
  int blocks = 0;
  for (size_t start = 0; start + n <= x.size(); start += n) {
    std::vector<double> seg(n);
    for (int i = 0; i < n; ++i)
      seg[i] = x[start + i] * (0.5 - 0.5 * std::cos(2 * std::numbers::pi * i / n));
    const auto spec = testing::BruteDft(seg, n);
    for (int k = 0; k <= n / 2; ++k) acc[k] += std::norm(spec[k]);
    ++blocks;
  }
  for (double &v : acc) v /= blocks;
  return acc;
}

TEST_CASE("ablation modes: same shapes, harmonic peaks only with the excitation") {
  const VocoderConfig v = PresetConfig("desk").vocoder;
  const F0Sequence f0{std::vector<double>(40, 250.0)};  // 0.4 s
  const Waveform full = MakeExcitation(f0, v, AblationMode::kFullExcitation, 3);
  const Waveform noise = MakeExcitation(f0, v, AblationMode::kNoiseOnly, 3);
  REQUIRE(full.size() == noise.size());
  ExcitationConfig ec = v.excitation;
  ec.rng_seed = 3;
  CHECK(full.samples == ProduceExcitation(UpsampleF0(f0, v.stft.frame_shift), ec).samples);

  // 250 Hz falls on every 16th bin of a 1024-point DFT at 16 kHz.
  auto peak_ratio = [](const std::vector<double> &p) {
    double worst = 1e300;
    for (int h = 1; h * 16 + 8 < 512; ++h) {
      double side = 0;
      for (int d = 4; d <= 8; ++d) side += p[h * 16 - d] + p[h * 16 + d];
      worst = std::min(worst, p[h * 16] / (side / 10));
    }
    return worst;
  };
  auto any_peak = [](const std::vector<double> &p) {
    double best = 0;
    for (int h = 1; h * 16 + 8 < 512; ++h) {
      double side = 0;
      for (int d = 4; d <= 8; ++d) side += p[h * 16 - d] + p[h * 16 + d];
      best = std::max(best, p[h * 16] / (side / 10));
    }
    return best;
  };
  CHECK(peak_ratio(AveragePeriodogram(full.samples)) > 100);
  CHECK(any_peak(AveragePeriodogram(noise.samples)) < 10);

  ParameterStore params;
  InitFilterParameters(v.filter, 1, &params);
  const Tensor mel({40, v.mel.num_mels});
  NoGradGuard guard;
  const GeneratorOutput a = Generate(full, mel, params, v);
  const GeneratorOutput b = Generate(noise, mel, params, v);
  CHECK(a.wave.shape() == b.wave.shape());
  CHECK(a.amplitude.shape() == b.amplitude.shape());
  CHECK(a.wave.shape() == Shape{40 * v.stft.frame_shift});
}

TEST_CASE("synthesis matches the generator and has the aligned length") {
  const VocoderConfig v = TinyVocoder();
  const auto data = TinyCorpus(v, 1, 0.2, 21);
  Trainer t(v, TinyTrain(), data);
  const Waveform w = Synthesize(data[0].f0, data[0].mel, t.params(), v);
  CHECK(w.size() == data[0].f0.size() * v.stft.frame_shift);
  CHECK(w.samples == Synthesize(data[0].f0, data[0].mel, t.params(), v).samples);
  const F0Sequence short_f0{std::vector<double>(3, 100.0)};
  CHECK_THROWS_AS(Synthesize(short_f0, data[0].mel, t.params(), v), Error);
}

}  // namespace
}  // namespace sfvoc
