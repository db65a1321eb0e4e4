// src/discriminators.cc

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

#include "sfvoc/discriminators.h"

#include <cmath>
#include <random>
#include <string>

#include "sfvoc/error.h"

namespace sfvoc {

namespace {

struct ConvLayer {
  Conv2dSpec spec;
  int cin, cout;
};

void AddConv(ParameterStore *p, const std::string &prefix, const ConvLayer &l,
             std::mt19937_64 &rng) {
  const int64_t fan_in = static_cast<int64_t>(l.spec.kernel_h) * l.spec.kernel_w * l.cin;
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  std::uniform_real_distribution<double> uni(-bound, bound);
  Tensor w({fan_in, l.cout});
  for (double &v : w.data) v = uni(rng);
  p->Add(prefix + "weight", std::move(w));
  p->Add(prefix + "bias", Tensor({l.cout}));
}

Var ApplyConv(const Var &x, const ParameterStore &p, const std::string &prefix,
              const Conv2dSpec &spec) {
  return Conv2d(x, p.Get(prefix + "weight"), p.Get(prefix + "bias"), spec);
}

std::vector<ConvLayer> MpdLayers(const MpdConfig &cfg) {
  std::vector<ConvLayer> layers;
  int cin = 1;
  for (size_t s = 0; s < cfg.channels.size(); ++s) {
    Conv2dSpec spec{cfg.kernel, 1, cfg.strides[s], 1, cfg.kernel / 2, 0};
    layers.push_back({spec, cin, cfg.channels[s]});
    cin = cfg.channels[s];
  }
  layers.push_back({Conv2dSpec{3, 1, 1, 1, 1, 0}, cin, 1});
  return layers;
}

std::vector<ConvLayer> MrdLayers(const MrdConfig &cfg) {
  const int c = cfg.channels;
  const Conv2dSpec wide{3, 9, 1, 1, 1, 4};
  const Conv2dSpec wide_strided{3, 9, 1, 2, 1, 4};
  const Conv2dSpec small{3, 3, 1, 1, 1, 1};
  return {{wide, 1, c},         {wide_strided, c, c}, {wide_strided, c, c},
          {wide_strided, c, c}, {wide_strided, c, c}, {small, c, c},
          {small, c, 1}};
}

std::string MpdPrefix(int period) {
  return "mpd/p" + std::to_string(period) + "/";
}
std::string MrdPrefix(size_t index) { return "mrd/r" + std::to_string(index) + "/"; }

DiscriminatorOutput RunStack(Var x, const ParameterStore &params,
                             const std::string &prefix,
                             const std::vector<ConvLayer> &layers, double slope) {
  DiscriminatorOutput out;
  for (size_t i = 0; i + 1 < layers.size(); ++i) {
    x = LeakyRelu(ApplyConv(x, params, prefix + "conv" + std::to_string(i) + "/",
                            layers[i].spec),
                  slope);
    out.features.push_back(x);
  }
  out.score = ApplyConv(x, params, prefix + "out/", layers.back().spec);
  out.features.push_back(out.score);
  return out;
}

void CheckWave(const Var &wave) {
  SFVOC_CHECK(wave.shape().size() == 1 && wave.size() >= 1,
              ErrorCode::kShapeMismatch,
              "discriminator expects a 1-D waveform, got " +
                  ShapeString(wave.shape()));
  SFVOC_CHECK(wave.value().AllFinite(), ErrorCode::kNonFinite,
              "non-finite discriminator input");
}

}  // namespace

void MpdConfig::Validate() const {
  SFVOC_CHECK(!periods.empty() && !channels.empty() &&
                  channels.size() == strides.size(),
              ErrorCode::kInvalidArgument,
              "mpd: periods/channels/strides must be non-empty and aligned");
  for (int p : periods)
    SFVOC_CHECK(p >= 1, ErrorCode::kInvalidArgument, "mpd: period must be >= 1");
  for (size_t i = 0; i < channels.size(); ++i)
    SFVOC_CHECK(channels[i] >= 1 && strides[i] >= 1, ErrorCode::kInvalidArgument,
                "mpd: channels and strides must be >= 1");
  SFVOC_CHECK(kernel >= 1 && kernel % 2 == 1, ErrorCode::kInvalidArgument,
              "mpd: kernel must be odd");
}

std::vector<StftConfig> MrdConfig::Resolutions() const {
  StftConfig half = base, twice = base;
  half.frame_length /= 2;
  half.frame_shift /= 2;
  half.fft_size /= 2;
  twice.frame_length *= 2;
  twice.frame_shift *= 2;
  twice.fft_size *= 2;
  return {half, base, twice};
}

void MrdConfig::Validate() const {
  for (const StftConfig &r : Resolutions()) r.Validate();
  SFVOC_CHECK(channels >= 1, ErrorCode::kInvalidArgument,
              "mrd: channels must be >= 1");
}

void InitMpdParameters(const MpdConfig &cfg, uint64_t seed, ParameterStore *params) {
  cfg.Validate();
  std::mt19937_64 rng(seed);
  const std::vector<ConvLayer> layers = MpdLayers(cfg);
  for (int period : cfg.periods) {
    const std::string pre = MpdPrefix(period);
    for (size_t i = 0; i + 1 < layers.size(); ++i)
      AddConv(params, pre + "conv" + std::to_string(i) + "/", layers[i], rng);
    AddConv(params, pre + "out/", layers.back(), rng);
  }
}

void InitMrdParameters(const MrdConfig &cfg, uint64_t seed, ParameterStore *params) {
  cfg.Validate();
  std::mt19937_64 rng(seed);
  const std::vector<ConvLayer> layers = MrdLayers(cfg);
  for (size_t r = 0; r < cfg.Resolutions().size(); ++r) {
    const std::string pre = MrdPrefix(r);
    for (size_t i = 0; i + 1 < layers.size(); ++i)
      AddConv(params, pre + "conv" + std::to_string(i) + "/", layers[i], rng);
    AddConv(params, pre + "out/", layers.back(), rng);
  }
}

Tensor PeriodReshape(std::span<const double> samples, int period) {
  NoGradGuard no_grad;
  Tensor in({static_cast<int64_t>(samples.size())},
            std::vector<double>(samples.begin(), samples.end()));
  Var folded = PeriodFold(Constant(std::move(in)), period);
  Tensor out = folded.value();
  out.shape = {out.shape[0], out.shape[1]};
  return out;
}

DiscriminatorOutputs MpdForward(const Var &wave, const ParameterStore &params,
                                const MpdConfig &cfg) {
  CheckWave(wave);
  const std::vector<ConvLayer> layers = MpdLayers(cfg);
  DiscriminatorOutputs outs;
  for (int period : cfg.periods)
    outs.push_back(RunStack(PeriodFold(wave, period), params, MpdPrefix(period),
                            layers, cfg.leaky_slope));
  return outs;
}

DiscriminatorOutputs MrdForward(const Var &wave, const ParameterStore &params,
                                const MrdConfig &cfg) {
  CheckWave(wave);
  SFVOC_CHECK(wave.size() >= 2 * cfg.base.frame_length, ErrorCode::kInvalidArgument,
              "mrd input of " + std::to_string(wave.size()) +
                  " samples is shorter than twice the base frame length");
  const std::vector<ConvLayer> layers = MrdLayers(cfg);
  const std::vector<StftConfig> res = cfg.Resolutions();
  DiscriminatorOutputs outs;
  for (size_t r = 0; r < res.size(); ++r) {
    Var mag = StftMagnitude(wave, res[r]);
    Var image = Reshape(mag, {mag.shape()[0], mag.shape()[1], 1});
    outs.push_back(RunStack(image, params, MrdPrefix(r), layers, cfg.leaky_slope));
  }
  return outs;
}

}  // namespace sfvoc
