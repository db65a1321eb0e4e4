// include/sfvoc/ops.h

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

#ifndef SFVOC_OPS_H_
#define SFVOC_OPS_H_

#include <vector>

#include "sfvoc/autograd.h"
#include "sfvoc/stft.h"

namespace sfvoc {

inline Var Constant(Tensor t) { return Var(std::move(t), false); }
inline Var Detach(const Var &v) { return Var(v.value(), false); }

// Elementwise.
Var Add(const Var &a, const Var &b);
Var Sub(const Var &a, const Var &b);
Var Mul(const Var &a, const Var &b);
Var Scale(const Var &a, double s);
Var AddScalar(const Var &a, double s);
Var Exp(const Var &a);
Var Log(const Var &a);
Var Abs(const Var &a);
Var Relu(const Var &a);
Var LeakyRelu(const Var &a, double slope);
Var Gelu(const Var &a);
Var Sigmoid(const Var &a);
Var Atan2(const Var &y, const Var &x);

// Reductions to a scalar.
Var Sum(const Var &a);
Var Mean(const Var &a);
Var MeanAbsDiff(const Var &a, const Var &b);
// mean(max(0, 1 - a)) and mean(max(0, 1 + a)).
Var HingeBelowOne(const Var &a);
Var HingeAboveMinusOne(const Var &a);
// Mean binary cross-entropy of sigmoid(logits) against 0/1 targets.
Var BceWithLogits(const Var &logits, const Tensor &targets);

Var Reshape(const Var &a, Shape shape);

// Matrices [rows, cols].
Var Linear(const Var &x, const Var &w, const Var &b);  // x . w + b
Var SliceCols(const Var &x, int64_t begin, int64_t end);
Var ConcatCols(const std::vector<Var> &parts);
Var LayerNorm(const Var &x, const Var &gamma, const Var &beta, double eps);

// [F, C] features; same (zero) padding along F.
Var DepthwiseConv1d(const Var &x, const Var &w, const Var &b);  // w [K, C]
// Gathers K neighbouring frames: [F, C] -> [F, K * C].
Var Im2Col1d(const Var &x, int kernel);
// Global response normalization with per-channel L2 aggregation over frames.
Var Grn(const Var &x, const Var &gamma, const Var &beta, double eps);

struct Conv2dSpec {
  int kernel_h = 1, kernel_w = 1;
  int stride_h = 1, stride_w = 1;
  int pad_h = 0, pad_w = 0;
};
int64_t ConvOutSize(int64_t in, int kernel, int stride, int pad);

// x [H, W, Cin], w [kh * kw * Cin, Cout], b [Cout] -> [Ho, Wo, Cout].
Var Conv2d(const Var &x, const Var &w, const Var &b, const Conv2dSpec &spec);

// Waveform [T] -> [ceil(T / p), p, 1], right reflect-padded.
Var PeriodFold(const Var &x, int period);

// Waveform [T] -> linear magnitude [F, N].
Var StftMagnitude(const Var &x, const StftConfig &cfg);
// Amplitude and phase [F, N] -> waveform [F * shift].
Var IstftOp(const Var &amplitude, const Var &phase, const StftConfig &cfg);
// log(max(amplitude . fb^T, floor)) with fb [M, N].
Var LogMel(const Var &amplitude, const Tensor &filterbank, double floor);

}  // namespace sfvoc

#endif  // SFVOC_OPS_H_
