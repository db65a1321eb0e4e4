// src/neural_filter.cc

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

#include "sfvoc/neural_filter.h"

#include <random>

#include "sfvoc/error.h"

namespace sfvoc {

void FilterConfig::Validate() const {
  SFVOC_CHECK(num_blocks >= 0 && hidden_dim >= 1 && spec_bins >= 1 && mel_bins >= 1,
              ErrorCode::kInvalidArgument, "filter dimensions must be positive");
  SFVOC_CHECK(kernel_size >= 1 && kernel_size % 2 == 1,
              ErrorCode::kInvalidArgument, "filter kernel_size must be odd");
  SFVOC_CHECK(ffn_ratio >= 1, ErrorCode::kInvalidArgument,
              "filter ffn_ratio must be >= 1");
}

namespace {

constexpr double kInitStd = 0.02;

void AddLinear(ParameterStore *p, const std::string &prefix, int64_t in,
               int64_t out, std::mt19937_64 &rng) {
  p->Add(prefix + "weight", TruncatedNormal({in, out}, kInitStd, rng));
  p->Add(prefix + "bias", Tensor({out}));
}

void AddNorm(ParameterStore *p, const std::string &prefix, int64_t dim) {
  p->Add(prefix + "gamma", Tensor({dim}, 1.0));
  p->Add(prefix + "beta", Tensor({dim}));
}

Var ApplyLinear(const Var &x, const ParameterStore &p, const std::string &prefix) {
  return Linear(x, p.Get(prefix + "weight"), p.Get(prefix + "bias"));
}

Var ApplyNorm(const Var &x, const ParameterStore &p, const std::string &prefix) {
  return LayerNorm(x, p.Get(prefix + "gamma"), p.Get(prefix + "beta"),
                   kLayerNormEps);
}

}  // namespace

void InitFilterParameters(const FilterConfig &cfg, uint64_t seed,
                          ParameterStore *params) {
  cfg.Validate();
  std::mt19937_64 rng(seed);
  const int64_t n = cfg.spec_bins, h = cfg.hidden_dim;
  const int64_t wide = static_cast<int64_t>(h) * cfg.ffn_ratio;
  AddLinear(params, "generator/spec_in/", 2 * n, h, rng);
  AddLinear(params, "generator/mel_in/", cfg.mel_bins, h, rng);
  for (int b = 0; b < cfg.num_blocks; ++b) {
    const std::string pre = "generator/block" + std::to_string(b) + "/";
    params->Add(pre + "dwconv/weight",
                TruncatedNormal({cfg.kernel_size, h}, kInitStd, rng));
    params->Add(pre + "dwconv/bias", Tensor({h}));
    AddNorm(params, pre + "norm/", h);
    AddLinear(params, pre + "expand/", h, wide, rng);
    params->Add(pre + "grn/gamma", Tensor({wide}));
    params->Add(pre + "grn/beta", Tensor({wide}));
    AddLinear(params, pre + "project/", wide, h, rng);
  }
  AddNorm(params, "generator/out_norm/", h);
  AddLinear(params, "generator/head/", h, 2 * n, rng);
  AddLinear(params, "generator/phase_proj/", n, 2 * n, rng);
}

Var ConvNextV2Block(const Var &h, const ParameterStore &params,
                    const std::string &prefix) {
  Var x = DepthwiseConv1d(h, params.Get(prefix + "dwconv/weight"),
                          params.Get(prefix + "dwconv/bias"));
  x = ApplyNorm(x, params, prefix + "norm/");
  x = Gelu(ApplyLinear(x, params, prefix + "expand/"));
  x = Grn(x, params.Get(prefix + "grn/gamma"), params.Get(prefix + "grn/beta"),
          kGrnEps);
  x = ApplyLinear(x, params, prefix + "project/");
  return Add(h, x);
}

FilterOutput FilterForward(const Var &excitation_amplitude,
                           const Var &excitation_phase, const Var &mel,
                           const ParameterStore &params, const FilterConfig &cfg) {
  const Shape spec_shape = excitation_amplitude.shape();
  SFVOC_CHECK(spec_shape.size() == 2 && spec_shape[1] == cfg.spec_bins &&
                  excitation_phase.shape() == spec_shape,
              ErrorCode::kShapeMismatch,
              "filter expects F x " + std::to_string(cfg.spec_bins) +
                  " excitation spectra, got " + ShapeString(spec_shape) +
                  " and " + ShapeString(excitation_phase.shape()));
  SFVOC_CHECK(mel.shape().size() == 2 && mel.shape()[0] == spec_shape[0] &&
                  mel.shape()[1] == cfg.mel_bins,
              ErrorCode::kShapeMismatch,
              "filter expects F x " + std::to_string(cfg.mel_bins) +
                  " mel input, got " + ShapeString(mel.shape()));
  SFVOC_CHECK(excitation_amplitude.value().AllFinite() &&
                  excitation_phase.value().AllFinite() && mel.value().AllFinite(),
              ErrorCode::kNonFinite, "non-finite filter input");
  for (const std::string &name : params.Names("generator/"))
    SFVOC_CHECK(params.Get(name).value().AllFinite(), ErrorCode::kNonFinite,
                "non-finite parameter " + name);

  const int64_t n = cfg.spec_bins;
  Var h = Add(ApplyLinear(ConcatCols({excitation_amplitude, excitation_phase}),
                          params, "generator/spec_in/"),
              ApplyLinear(mel, params, "generator/mel_in/"));
  for (int b = 0; b < cfg.num_blocks; ++b)
    h = ConvNextV2Block(h, params, "generator/block" + std::to_string(b) + "/");
  h = ApplyLinear(ApplyNorm(h, params, "generator/out_norm/"), params,
                  "generator/head/");

  FilterOutput out;
  out.amplitude = Exp(SliceCols(h, 0, n));
  Var sincos = ApplyLinear(SliceCols(h, n, 2 * n), params, "generator/phase_proj/");
  out.phase = Atan2(SliceCols(sincos, 0, n), SliceCols(sincos, n, 2 * n));
  return out;
}

SpectralPair RunFilter(const SpectralPair &excitation, const MelSpectrogram &mel,
                       const ParameterStore &params, const FilterConfig &cfg) {
  NoGradGuard no_grad;
  FilterOutput out =
      FilterForward(Constant(excitation.amplitude), Constant(excitation.phase),
                    Constant(mel.values), params, cfg);
  return SpectralPair{out.amplitude.value(), out.phase.value()};
}

}  // namespace sfvoc
