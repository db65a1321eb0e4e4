// include/sfvoc/tensor.h

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

#ifndef SFVOC_TENSOR_H_
#define SFVOC_TENSOR_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sfvoc {

using Shape = std::vector<int64_t>;

int64_t NumElements(const Shape &shape);
std::string ShapeString(const Shape &shape);

// Dense row-major array of doubles.  Matrices are [rows, cols]; convolution
// feature maps are [height, width, channels].
struct Tensor {
  Shape shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(Shape s, double fill = 0.0)
      : shape(std::move(s)), data(NumElements(shape), fill) {}
  Tensor(Shape s, std::vector<double> values);

  static Tensor Scalar(double v) { return Tensor(Shape{}, {v}); }

  int64_t size() const { return static_cast<int64_t>(data.size()); }
  int64_t dim(size_t i) const { return shape.at(i); }
  int64_t rows() const { return shape.at(0); }
  int64_t cols() const { return shape.at(1); }
  bool empty() const { return data.empty(); }

  double &operator[](int64_t i) { return data[i]; }
  double operator[](int64_t i) const { return data[i]; }
  double &at(int64_t r, int64_t c) { return data[r * shape[1] + c]; }
  double at(int64_t r, int64_t c) const { return data[r * shape[1] + c]; }

  std::span<double> row(int64_t r) {
    return {data.data() + r * shape[1], static_cast<size_t>(shape[1])};
  }
  std::span<const double> row(int64_t r) const {
    return {data.data() + r * shape[1], static_cast<size_t>(shape[1])};
  }

  bool AllFinite() const;
  void Fill(double v);
};

bool operator==(const Tensor &a, const Tensor &b);

}  // namespace sfvoc

#endif  // SFVOC_TENSOR_H_
