// tests/test_neural_filter.cc

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
#include <numbers>
#include <random>

#include "doctest.h"
#include "sfvoc/error.h"
#include "sfvoc/neural_filter.h"
#include "test_util.h"

namespace sfvoc {
namespace {

using testing::RandomTensor;

FilterConfig Mini() {
  FilterConfig c;
  c.num_blocks = 2;
  c.hidden_dim = 8;
  c.kernel_size = 3;
  c.spec_bins = 9;
  c.mel_bins = 4;
  return c;
}

struct Inputs {
  Tensor amp, phase, mel;
};

Inputs RandomInputs(int64_t frames, const FilterConfig &cfg, std::mt19937_64 &rng) {
  Inputs in{RandomTensor({frames, cfg.spec_bins}, rng),
            RandomTensor({frames, cfg.spec_bins}, rng, 2.0),
            RandomTensor({frames, cfg.mel_bins}, rng, 3.0)};
  for (double &v : in.amp.data) v = std::abs(v);
  return in;
}

void RandomizeGrn(ParameterStore *p, std::mt19937_64 &rng) {
  for (const std::string &name : p->Names("generator/"))
    if (name.find("/grn/") != std::string::npos)
      p->Get(name).mutable_value() = RandomTensor(p->Get(name).shape(), rng, 0.5);
}

TEST_CASE("filter output shapes and ranges at full size") {
  const FilterConfig cfg;
  ParameterStore params;
  InitFilterParameters(cfg, 1, &params);
  std::mt19937_64 rng(2);
  const Inputs in = RandomInputs(10, cfg, rng);
  const SpectralPair out =
      RunFilter(SpectralPair{in.amp, in.phase}, MelSpectrogram{in.mel}, params, cfg);
  CHECK(out.amplitude.shape == Shape{10, 513});
  CHECK(out.phase.shape == Shape{10, 513});
  for (double a : out.amplitude.data) CHECK(a > 0);
  for (double p : out.phase.data) {
    CHECK(p > -std::numbers::pi);
    CHECK(p <= std::numbers::pi);
  }
  const SpectralPair again =
      RunFilter(SpectralPair{in.amp, in.phase}, MelSpectrogram{in.mel}, params, cfg);
  CHECK(again.amplitude == out.amplitude);
  CHECK(again.phase == out.phase);
}

TEST_CASE("log amplitude stays finite for extreme finite inputs") {
  const FilterConfig cfg = Mini();
  ParameterStore params;
  InitFilterParameters(cfg, 3, &params);
  std::mt19937_64 rng(4);
  for (double scale : {1e-12, 1.0, 1e6, 1e12}) {
    Inputs in = RandomInputs(6, cfg, rng);
    for (double &v : in.amp.data) v *= scale;
    for (double &v : in.mel.data) v *= scale;
    const SpectralPair out =
        RunFilter(SpectralPair{in.amp, in.phase}, MelSpectrogram{in.mel}, params, cfg);
    for (double a : out.amplitude.data) {
      CHECK(a > 0);
      CHECK(std::isfinite(std::log(a)));
    }
  }
}

TEST_CASE("zeroed block transform is the identity") {
  const FilterConfig cfg = Mini();
  ParameterStore params;
  InitFilterParameters(cfg, 5, &params);
  for (const std::string &name : params.Names("generator/block0/"))
    params.Get(name).mutable_value().Fill(0.0);
  std::mt19937_64 rng(6);
  const Var h = Constant(RandomTensor({7, cfg.hidden_dim}, rng));
  CHECK(ConvNextV2Block(h, params, "generator/block0/").value() == h.value());
}

TEST_CASE("block preserves shape for any frame count") {
  const FilterConfig cfg = Mini();
  ParameterStore params;
  InitFilterParameters(cfg, 7, &params);
  std::mt19937_64 rng(8);
  for (int64_t f : {1, 7, 64}) {
    const Var h = Constant(RandomTensor({f, cfg.hidden_dim}, rng));
    CHECK(ConvNextV2Block(h, params, "generator/block1/").shape() == h.shape());
  }
}

TEST_CASE("block gradients match finite differences on a 4-wide toy block") {
  FilterConfig cfg = Mini();
  cfg.hidden_dim = 4;
  ParameterStore params;
  InitFilterParameters(cfg, 9, &params);
  std::mt19937_64 rng(10);
  RandomizeGrn(&params, rng);
  // Larger weights than the 0.02 init so every path carries signal.
  for (const std::string &name : params.Names("generator/block0/"))
    if (name.ends_with("weight"))
      params.Get(name).mutable_value() = RandomTensor(params.Get(name).shape(), rng, 0.5);
  Var h(RandomTensor({6, 4}, rng), true);
  const Tensor probe = RandomTensor({6, 4}, rng);
  auto loss = [&] {
    return Sum(Mul(ConvNextV2Block(h, params, "generator/block0/"), Constant(probe)));
  };
  std::vector<std::pair<std::string, Var>> inputs{{"h", h}};
  for (const std::string &name : params.Names("generator/block0/"))
    inputs.emplace_back(name, params.Get(name));
  const auto r = testing::GradCheck(loss, inputs, 24);
  INFO(r.worst_group << " " << r.max_rel_error);
  CHECK(r.max_rel_error < 1e-4);
}

TEST_CASE("generator gradients for every parameter group on the miniature config") {
  const FilterConfig cfg = Mini();
  ParameterStore params;
  InitFilterParameters(cfg, 11, &params);
  std::mt19937_64 rng(12);
  RandomizeGrn(&params, rng);
  for (const std::string &name : params.Names("generator/"))
    if (name.ends_with("weight"))
      params.Get(name).mutable_value() = RandomTensor(params.Get(name).shape(), rng, 0.4);
  const Inputs in = RandomInputs(8, cfg, rng);
  const Tensor pa = RandomTensor({8, 9}, rng), pp = RandomTensor({8, 9}, rng);
  auto loss = [&] {
    const FilterOutput o = FilterForward(Constant(in.amp), Constant(in.phase),
                                         Constant(in.mel), params, cfg);
    return Add(Sum(Mul(Log(o.amplitude), Constant(pa))), Sum(Mul(o.phase, Constant(pp))));
  };
  std::vector<std::pair<std::string, Var>> inputs;
  for (const std::string &name : params.Names("generator/"))
    inputs.emplace_back(name, params.Get(name));
  const auto r = testing::GradCheck(loss, inputs, 10);
  INFO(r.worst_group << " " << r.max_rel_error);
  CHECK(r.max_rel_error < 1e-4);
}

TEST_CASE("frame locality holds while the GRN terms are at their zero init") {
  FilterConfig cfg = Mini();
  cfg.num_blocks = 3;
  cfg.kernel_size = 5;
  ParameterStore params;
  InitFilterParameters(cfg, 13, &params);
  std::mt19937_64 rng(14);
  const int64_t frames = 40, changed = 20;
  const int64_t radius = cfg.num_blocks * (cfg.kernel_size - 1) / 2;
  Inputs a = RandomInputs(frames, cfg, rng);
  Inputs b = a;
  for (int64_t k = 0; k < cfg.spec_bins; ++k) b.amp.at(changed, k) += 1.0;
  b.mel.at(changed, 0) -= 2.0;
  const SpectralPair ya =
      RunFilter(SpectralPair{a.amp, a.phase}, MelSpectrogram{a.mel}, params, cfg);
  const SpectralPair yb =
      RunFilter(SpectralPair{b.amp, b.phase}, MelSpectrogram{b.mel}, params, cfg);
  for (int64_t f = 0; f < frames; ++f) {
    bool same = true;
    for (int64_t k = 0; k < cfg.spec_bins; ++k)
      same = same && ya.amplitude.at(f, k) == yb.amplitude.at(f, k) &&
             ya.phase.at(f, k) == yb.phase.at(f, k);
    if (std::abs(f - changed) > radius)
      CHECK(same);
    else if (f == changed)
      CHECK_FALSE(same);
  }
}

TEST_CASE("filter rejects malformed inputs and parameters") {
  const FilterConfig cfg = Mini();
  ParameterStore params;
  InitFilterParameters(cfg, 15, &params);
  std::mt19937_64 rng(16);
  const Inputs in = RandomInputs(5, cfg, rng);
  auto run = [&](const Tensor &a, const Tensor &p, const Tensor &m) {
    return FilterForward(Constant(a), Constant(p), Constant(m), params, cfg);
  };
  CHECK_THROWS_AS(run(Tensor({5, 8}), in.phase, in.mel), Error);
  CHECK_THROWS_AS(run(in.amp, in.phase, Tensor({4, 4})), Error);
  CHECK_THROWS_AS(run(in.amp, in.phase, Tensor({5, 5})), Error);
  Tensor bad = in.mel;
  bad.data[3] = std::nan("");
  try {
    run(in.amp, in.phase, bad);
    FAIL("expected a non-finite error");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kNonFinite);
  }
  params.Get("generator/head/bias").mutable_value().data[0] = INFINITY;
  CHECK_THROWS_AS(run(in.amp, in.phase, in.mel), Error);
}

TEST_CASE("parameter inventory follows the configuration") {
  const FilterConfig cfg = Mini();
  ParameterStore params;
  InitFilterParameters(cfg, 17, &params);
  CHECK(params.Get("generator/spec_in/weight").shape() == Shape{18, 8});
  CHECK(params.Get("generator/mel_in/weight").shape() == Shape{4, 8});
  CHECK(params.Get("generator/block1/dwconv/weight").shape() == Shape{3, 8});
  CHECK(params.Get("generator/block1/expand/weight").shape() == Shape{8, 24});
  CHECK(params.Get("generator/block1/grn/gamma").shape() == Shape{24});
  CHECK(params.Get("generator/head/weight").shape() == Shape{8, 18});
  CHECK(params.Get("generator/phase_proj/weight").shape() == Shape{9, 18});
  CHECK_FALSE(params.Contains("generator/block2/dwconv/weight"));
  for (double v : params.Get("generator/block0/grn/gamma").value().data) CHECK(v == 0.0);
  double max_abs = 0;
  for (double v : params.Get("generator/spec_in/weight").value().data)
    max_abs = std::max(max_abs, std::abs(v));
  CHECK(max_abs <= 0.04);  // truncated at two standard deviations
  FilterConfig even = cfg;
  even.kernel_size = 4;
  CHECK_THROWS_AS(even.Validate(), Error);
}

}  // namespace
}  // namespace sfvoc
