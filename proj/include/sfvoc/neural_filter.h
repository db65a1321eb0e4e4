// include/sfvoc/neural_filter.h

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

#ifndef SFVOC_NEURAL_FILTER_H_
#define SFVOC_NEURAL_FILTER_H_

#include <cstdint>
#include <string>

#include "sfvoc/mel.h"
#include "sfvoc/ops.h"
#include "sfvoc/params.h"
#include "sfvoc/stft.h"

namespace sfvoc {

struct FilterConfig {
  int num_blocks = 8;
  int hidden_dim = 512;
  int kernel_size = 7;
  int ffn_ratio = 3;
  int spec_bins = 513;
  int mel_bins = 80;

  void Validate() const;
  bool operator==(const FilterConfig &) const = default;
};

inline constexpr double kLayerNormEps = 1e-6;
inline constexpr double kGrnEps = 1e-6;

// Adds every "generator/..." parameter: truncated-normal (std 0.02) weights,
// zero biases, unit LayerNorm scales, zero GRN gamma/beta.
void InitFilterParameters(const FilterConfig &cfg, uint64_t seed,
                          ParameterStore *params);

// Depthwise conv -> LayerNorm -> expand -> GELU -> GRN -> project, plus the
// residual input.  `prefix` is e.g. "generator/block3/".
Var ConvNextV2Block(const Var &h, const ParameterStore &params,
                    const std::string &prefix);

struct FilterOutput {
  Var amplitude;  // F x N, exp head
  Var phase;      // F x N, atan2 head
};

// Transforms excitation spectra to speech spectra conditioned on the mel
// spectrogram.  Inputs are F x N, F x N and F x M.
FilterOutput FilterForward(const Var &excitation_amplitude,
                           const Var &excitation_phase, const Var &mel,
                           const ParameterStore &params, const FilterConfig &cfg);

// Inference convenience wrapper (no tape).
SpectralPair RunFilter(const SpectralPair &excitation, const MelSpectrogram &mel,
                       const ParameterStore &params, const FilterConfig &cfg);

}  // namespace sfvoc

#endif  // SFVOC_NEURAL_FILTER_H_
