// include/sfvoc/params.h

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

#ifndef SFVOC_PARAMS_H_
#define SFVOC_PARAMS_H_

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "sfvoc/autograd.h"

namespace sfvoc {

// Named trainable arrays.  Paths use '/' separators and a component prefix
// ("generator/", "mpd/", "mrd/", "f0_predictor/").  Each entry is a leaf node
// of the tape, so Var handles returned by Get() accumulate gradients in place.
class ParameterStore {
 public:
  Var Add(const std::string &name, Tensor init);
  Var Get(const std::string &name) const;
  bool Contains(const std::string &name) const { return entries_.count(name) > 0; }

  std::vector<std::string> Names(std::string_view prefix = "") const;
  int64_t NumValues(std::string_view prefix = "") const;

  void ZeroGrad(std::string_view prefix = "");
  void SetRequiresGrad(std::string_view prefix, bool requires_grad);
  bool AllFinite() const;

  const std::map<std::string, std::shared_ptr<Node>> &entries() const {
    return entries_;
  }

 private:
  std::map<std::string, std::shared_ptr<Node>> entries_;
};

// Normal(0, std) truncated to +-2 std, drawn by rejection.
Tensor TruncatedNormal(const Shape &shape, double std, std::mt19937_64 &rng);

}  // namespace sfvoc

#endif  // SFVOC_PARAMS_H_
