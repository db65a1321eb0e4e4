// src/f0_predictor.cc

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

#include "sfvoc/f0_predictor.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "sfvoc/error.h"
#include "sfvoc/optimizer.h"

namespace sfvoc {

namespace {

void AddDense(ParameterStore *p, const std::string &prefix, int64_t in, int64_t out,
              std::mt19937_64 &rng, double bias = 0.0) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  std::uniform_real_distribution<double> uni(-bound, bound);
  Tensor w({in, out});
  for (double &v : w.data) v = uni(rng);
  p->Add(prefix + "weight", std::move(w));
  p->Add(prefix + "bias", Tensor({out}, bias));
}

Var Dense(const Var &x, const ParameterStore &p, const std::string &prefix) {
  return Linear(x, p.Get(prefix + "weight"), p.Get(prefix + "bias"));
}

std::string ConvPrefix(int k) { return "f0/conv_k" + std::to_string(k) + "/"; }

}  // namespace

void F0PredictorConfig::Validate() const {
  SFVOC_CHECK(kernel_sizes.size() == 3, ErrorCode::kInvalidArgument,
              "f0 predictor needs exactly three kernel sizes");
  std::set<int> distinct(kernel_sizes.begin(), kernel_sizes.end());
  SFVOC_CHECK(distinct.size() == 3, ErrorCode::kInvalidArgument,
              "f0 predictor kernel sizes must be distinct");
  for (int k : kernel_sizes)
    SFVOC_CHECK(k >= 1 && k % 2 == 1, ErrorCode::kInvalidArgument,
                "f0 predictor kernel sizes must be odd");
  SFVOC_CHECK(conv_channels >= 1 && head_hidden >= 1 && mel_bins >= 1,
              ErrorCode::kInvalidArgument, "f0 predictor widths must be positive");
  SFVOC_CHECK(contour_scale_hz > 0 && threshold > 0 && threshold < 1,
              ErrorCode::kInvalidArgument,
              "f0 predictor needs a positive scale and a threshold in (0, 1)");
}

void InitF0PredictorParameters(const F0PredictorConfig &cfg, uint64_t seed,
                               ParameterStore *params) {
  cfg.Validate();
  std::mt19937_64 rng(seed);
  for (int k : cfg.kernel_sizes)
    AddDense(params, ConvPrefix(k), static_cast<int64_t>(k) * cfg.mel_bins,
             cfg.conv_channels, rng);
  const int64_t joint = 3 * static_cast<int64_t>(cfg.conv_channels);
  AddDense(params, "f0/vuv_hidden/", joint, cfg.head_hidden, rng);
  AddDense(params, "f0/vuv_out/", cfg.head_hidden, 1, rng);
  AddDense(params, "f0/contour_hidden/", joint, cfg.head_hidden, rng);
  // Start the contour near contour_scale_hz so the ReLU is active.
  AddDense(params, "f0/contour_out/", cfg.head_hidden, 1, rng, 1.0);
}

F0PredictorOutput F0PredictorForward(const Var &mel, const ParameterStore &params,
                                     const F0PredictorConfig &cfg) {
  SFVOC_CHECK(mel.shape().size() == 2 && mel.shape()[1] == cfg.mel_bins &&
                  mel.shape()[0] >= 1,
              ErrorCode::kShapeMismatch,
              "f0 predictor expects F x " + std::to_string(cfg.mel_bins) +
                  " mel, got " + ShapeString(mel.shape()));
  SFVOC_CHECK(mel.value().AllFinite(), ErrorCode::kNonFinite,
              "non-finite mel input to f0 predictor");
  std::vector<Var> branches;
  for (int k : cfg.kernel_sizes)
    branches.push_back(Relu(Dense(Im2Col1d(mel, k), params, ConvPrefix(k))));
  Var joint = ConcatCols(branches);
  F0PredictorOutput out;
  out.vuv_logit =
      Dense(Relu(Dense(joint, params, "f0/vuv_hidden/")), params, "f0/vuv_out/");
  out.contour = Scale(Relu(Dense(Relu(Dense(joint, params, "f0/contour_hidden/")),
                                 params, "f0/contour_out/")),
                      cfg.contour_scale_hz);
  return out;
}

Var F0PredictorLoss(const F0PredictorOutput &out, const F0Sequence &target) {
  const int64_t f = out.contour.shape()[0];
  SFVOC_CHECK(target.size() == f, ErrorCode::kShapeMismatch,
              "target F0 has " + std::to_string(target.size()) + " frames, expected " +
                  std::to_string(f));
  Tensor mask({f, 1}), log_target({f, 1}), voiced({f, 1});
  int64_t count = 0;
  for (int64_t t = 0; t < f; ++t) {
    const double hz = target.values[t];
    if (hz > 0) {
      mask.data[t] = voiced.data[t] = 1.0;
      log_target.data[t] = std::log1p(hz);
      ++count;
    }
  }
  Var loss = BceWithLogits(out.vuv_logit, voiced);
  if (count > 0) {
    Var diff = Sub(Log(AddScalar(out.contour, 1.0)), Constant(std::move(log_target)));
    Var masked = Mul(Abs(diff), Constant(std::move(mask)));
    loss = Add(loss, Scale(Sum(masked), 1.0 / static_cast<double>(count)));
  }
  return loss;
}

F0Prediction PredictF0(const MelSpectrogram &mel, const ParameterStore &params,
                       const F0PredictorConfig &cfg) {
  NoGradGuard no_grad;
  F0PredictorOutput out = F0PredictorForward(Constant(mel.values), params, cfg);
  F0Prediction p;
  p.contour = out.contour.value().data;
  for (double z : out.vuv_logit.value().data)
    p.vuv_prob.push_back(1.0 / (1.0 + std::exp(-z)));
  return p;
}

F0Sequence CombineF0(std::span<const double> contour,
                     std::span<const double> vuv_prob, double threshold) {
  SFVOC_CHECK(contour.size() == vuv_prob.size(), ErrorCode::kShapeMismatch,
              "contour and V/UV lengths differ");
  F0Sequence f0;
  f0.values.resize(contour.size());
  for (size_t t = 0; t < contour.size(); ++t) {
    SFVOC_CHECK(std::isfinite(contour[t]) && contour[t] >= 0,
                ErrorCode::kNonFinite, "invalid contour value");
    f0.values[t] = vuv_prob[t] >= threshold ? contour[t] : 0.0;
  }
  return f0;
}

std::vector<double> TrainF0Predictor(const std::vector<F0TrainingExample> &data,
                                     const F0PredictorConfig &cfg, int steps,
                                     double learning_rate, uint64_t seed,
                                     ParameterStore *params) {
  SFVOC_CHECK(!data.empty(), ErrorCode::kInvalidArgument,
              "f0 predictor training needs at least one utterance");
  AdamW opt(AdamWConfig{0.9, 0.999, 1e-8, 0.0});
  std::mt19937_64 rng(seed);
  std::vector<size_t> order(data.size());
  std::vector<double> losses;
  size_t cursor = order.size();
  for (int step = 0; step < steps; ++step) {
    if (cursor == order.size()) {
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      cursor = 0;
    }
    const F0TrainingExample &ex = data[order[cursor++]];
    params->ZeroGrad("f0/");
    Var loss = F0PredictorLoss(
        F0PredictorForward(Constant(ex.mel.values), *params, cfg), ex.f0);
    SFVOC_CHECK(std::isfinite(loss.item()), ErrorCode::kNonFinite,
                "f0 predictor loss became non-finite at step " + std::to_string(step));
    Backward(loss);
    opt.Step(params, "f0/", learning_rate);
    losses.push_back(loss.item());
  }
  return losses;
}

}  // namespace sfvoc
