// src/tensor.cc

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

#include "sfvoc/tensor.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sfvoc/error.h"

namespace sfvoc {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kShapeMismatch: return "shape_mismatch";
    case ErrorCode::kRateMismatch: return "rate_mismatch";
    case ErrorCode::kChannelCount: return "channel_count";
    case ErrorCode::kUnsupportedFormat: return "unsupported_format";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kCorrupt: return "corrupt";
    case ErrorCode::kVersionMismatch: return "version_mismatch";
    case ErrorCode::kConfigMismatch: return "config_mismatch";
    case ErrorCode::kNonFinite: return "non_finite";
    case ErrorCode::kConfig: return "config";
  }
  return "unknown";
}

int64_t NumElements(const Shape &shape) {
  int64_t n = 1;
  for (int64_t d : shape) n *= d;
  return n;
}

std::string ShapeString(const Shape &shape) {
  std::ostringstream os;
  os << '[';
  for (size_t i = 0; i < shape.size(); ++i) os << (i ? "," : "") << shape[i];
  os << ']';
  return os.str();
}

Tensor::Tensor(Shape s, std::vector<double> values)
    : shape(std::move(s)), data(std::move(values)) {
  SFVOC_CHECK(NumElements(shape) == static_cast<int64_t>(data.size()),
              ErrorCode::kShapeMismatch,
              "tensor data size " + std::to_string(data.size()) +
                  " does not match shape " + ShapeString(shape));
}

bool Tensor::AllFinite() const {
  return std::all_of(data.begin(), data.end(),
                     [](double v) { return std::isfinite(v); });
}

void Tensor::Fill(double v) { std::fill(data.begin(), data.end(), v); }

bool operator==(const Tensor &a, const Tensor &b) {
  return a.shape == b.shape && a.data == b.data;
}

}  // namespace sfvoc
