// tests/test_discriminators.cc

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

#include <random>
#include <set>
#include <string>

#include "doctest.h"
#include "sfvoc/discriminators.h"
#include "sfvoc/error.h"
#include "sfvoc/losses.h"
#include "test_util.h"

namespace sfvoc {
namespace {

Var WaveVar(int64_t n, std::mt19937_64 &rng) {
  std::vector<double> s = testing::RandomWave(n, rng).samples;
  return Constant(Tensor({n}, std::move(s)));
}

MpdConfig SmallMpd() {
  MpdConfig c;
  c.channels = {4, 8, 8, 8, 8};
  return c;
}

MrdConfig SmallMrd() {
  MrdConfig c;
  c.channels = 4;
  return c;
}

TEST_CASE("period reshape examples") {
  const std::vector<double> x8{0, 1, 2, 3, 4, 5, 6, 7};
  const Tensor m = PeriodReshape(x8, 2);
  CHECK(m.shape == Shape{4, 2});
  CHECK(m.data == x8);

  // Reflect padding of one sample repeats x5.
  const std::vector<double> x7{0, 1, 2, 3, 4, 5, 6};
  const Tensor p = PeriodReshape(x7, 2);
  CHECK(p.shape == Shape{4, 2});
  CHECK(p.at(3, 0) == 6);
  CHECK(p.at(3, 1) == 5);

  const Tensor col = PeriodReshape(x7, 1);
  CHECK(col.shape == Shape{7, 1});
  CHECK(col.data == x7);
}

TEST_CASE("mpd structural contract at full width") {
  const MpdConfig cfg;
  ParameterStore params;
  InitMpdParameters(cfg, 1, &params);
  std::mt19937_64 rng(2);
  const Var x = WaveVar(600, rng);
  NoGradGuard guard;
  const DiscriminatorOutputs out = MpdForward(x, params, cfg);
  REQUIRE(out.size() == 5);
  for (size_t i = 0; i < out.size(); ++i) {
    CHECK(out[i].features.size() == 6);
    CHECK(out[i].features.back().value() == out[i].score.value());
    CHECK(out[i].features[3].shape()[2] == 1024);
    CHECK(out[i].score.shape()[1] == cfg.periods[i]);
    CHECK(out[i].score.shape()[2] == 1);
  }
}

TEST_CASE("mpd zero input with zero biases gives zero scores") {
  const MpdConfig cfg = SmallMpd();
  ParameterStore params;
  InitMpdParameters(cfg, 3, &params);
  NoGradGuard guard;
  for (const DiscriminatorOutput &d : MpdForward(Constant(Tensor({500})), params, cfg))
    for (double v : d.score.value().data) CHECK(v == 0.0);
}

TEST_CASE("mpd doubling the length only changes the folded axis") {
  const MpdConfig cfg = SmallMpd();
  ParameterStore params;
  InitMpdParameters(cfg, 4, &params);
  std::mt19937_64 rng(5);
  NoGradGuard guard;
  const DiscriminatorOutputs a = MpdForward(WaveVar(990, rng), params, cfg);
  const DiscriminatorOutputs b = MpdForward(WaveVar(1980, rng), params, cfg);
  for (size_t i = 0; i < a.size(); ++i) {
    const Shape sa = a[i].score.shape(), sb = b[i].score.shape();
    CHECK(sb[0] > sa[0]);
    CHECK(sa[1] == sb[1]);
    CHECK(sa[2] == sb[2]);
    for (size_t l = 0; l < a[i].features.size(); ++l)
      CHECK(a[i].features[l].shape()[2] == b[i].features[l].shape()[2]);
  }
}

TEST_CASE("mrd structural contract and bin counts") {
  const MrdConfig cfg = SmallMrd();
  const std::vector<StftConfig> res = cfg.Resolutions();
  REQUIRE(res.size() == 3);
  CHECK(res[0].frame_length == 320);
  CHECK(res[0].frame_shift == 80);
  CHECK(res[0].fft_size == 512);
  CHECK(res[2].frame_length == 1280);
  CHECK(res[2].frame_shift == 320);
  CHECK(res[2].fft_size == 2048);

  ParameterStore params;
  InitMrdParameters(cfg, 6, &params);
  std::mt19937_64 rng(7);
  const Var x = WaveVar(3200, rng);
  NoGradGuard guard;
  const DiscriminatorOutputs out = MrdForward(x, params, cfg);
  REQUIRE(out.size() == 3);
  const int64_t bins[3] = {257, 513, 1025};
  const int64_t frames[3] = {40, 20, 10};
  for (size_t r = 0; r < 3; ++r) {
    CHECK(out[r].features.size() == kMrdBlocks + 1);
    // The first block is unstrided, so it still spans every bin.
    CHECK(out[r].features[0].shape() == Shape{frames[r], bins[r], 4});
    CHECK(out[r].score.shape()[2] == 1);
  }
  const DiscriminatorOutputs again = MrdForward(x, params, cfg);
  for (size_t r = 0; r < 3; ++r) CHECK(again[r].score.value() == out[r].score.value());
}

TEST_CASE("mrd zero input gives zero scores and rejects short input") {
  const MrdConfig cfg = SmallMrd();
  ParameterStore params;
  InitMrdParameters(cfg, 8, &params);
  NoGradGuard guard;
  for (const DiscriminatorOutput &d : MrdForward(Constant(Tensor({1280})), params, cfg))
    for (double v : d.score.value().data) CHECK(v == 0.0);
  CHECK_THROWS_AS(MrdForward(Constant(Tensor({1279})), params, cfg), Error);
  Tensor bad({2000});
  bad.data[10] = std::nan("");
  CHECK_THROWS_AS(MrdForward(Constant(bad), params, cfg), Error);
  CHECK_THROWS_AS(MpdForward(Constant(Tensor({10, 10})), params, MpdConfig{}), Error);
}

TEST_CASE("mpd is deterministic") {
  const MpdConfig cfg = SmallMpd();
  ParameterStore p1, p2;
  InitMpdParameters(cfg, 9, &p1);
  InitMpdParameters(cfg, 9, &p2);
  std::mt19937_64 rng(10);
  const Var x = WaveVar(700, rng);
  NoGradGuard guard;
  const DiscriminatorOutputs a = MpdForward(x, p1, cfg), b = MpdForward(x, p2, cfg);
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].score.value() == b[i].score.value());
}

TEST_CASE("every discriminator parameter gets a nonzero gradient under the hinge loss") {
  const MpdConfig mpd = SmallMpd();
  MrdConfig mrd = SmallMrd();
  mrd.base.frame_length = 64;
  mrd.base.frame_shift = 16;
  mrd.base.fft_size = 64;
  ParameterStore params;
  InitMpdParameters(mpd, 11, &params);
  InitMrdParameters(mrd, 12, &params);
  std::mt19937_64 rng(13);
  std::set<std::string> reached;
  for (int trial = 0; trial < 3; ++trial) {
    params.ZeroGrad();
    // When every real and fake score of a sub-discriminator lies inside both
    // margins, the hinge gradients of the output bias cancel exactly.  Spread
    // the scores across the margins (variance-preserving weights, random
    // biases, inputs of different scale) and require each parameter to see
    // a gradient in at least one trial.
    for (const std::string &name : params.Names("")) {
      Tensor &v = params.Get(name).mutable_value();
      if (name.ends_with("bias"))
        v = testing::RandomTensor(v.shape, rng, name.ends_with("out/bias") ? 1.0 : 0.3);
      else if (trial == 0)
        for (double &w : v.data) w *= 3.0;
    }
    Var real = WaveVar(900, rng);
    {
      Tensor t = real.value();
      for (double &v : t.data) v *= 4.0;
      real = Constant(std::move(t));
    }
    const Var fake = WaveVar(900, rng);
    const SubLosses a = DiscriminatorSubLosses(MpdForward(real, params, mpd),
                                               MpdForward(fake, params, mpd));
    const SubLosses b = DiscriminatorSubLosses(MrdForward(real, params, mrd),
                                               MrdForward(fake, params, mrd));
    Backward(DiscriminatorObjective(a, b, LossWeights{}));
    for (const std::string &name : params.Names("")) {
      double norm = 0;
      for (double g : params.Get(name).grad().data) norm += g * g;
      if (norm > 0) reached.insert(name);
    }
  }
  for (const std::string &name : params.Names("")) {
    INFO(name);
    CHECK(reached.count(name) == 1);
  }
}

TEST_CASE("discriminator config validation") {
  MpdConfig m;
  m.kernel = 4;
  CHECK_THROWS_AS(m.Validate(), Error);
  m = MpdConfig{};
  m.strides.pop_back();
  CHECK_THROWS_AS(m.Validate(), Error);
  m = MpdConfig{};
  m.periods = {0};
  CHECK_THROWS_AS(m.Validate(), Error);
  MrdConfig r;
  r.channels = 0;
  CHECK_THROWS_AS(r.Validate(), Error);
}

}  // namespace
}  // namespace sfvoc
