// include/sfvoc/optimizer.h

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

#ifndef SFVOC_OPTIMIZER_H_
#define SFVOC_OPTIMIZER_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "sfvoc/checkpoint.h"
#include "sfvoc/params.h"

namespace sfvoc {

struct AdamWConfig {
  double beta1 = 0.8;
  double beta2 = 0.99;
  double eps = 1e-8;
  double weight_decay = 0.01;

  void Validate() const;
  bool operator==(const AdamWConfig &) const = default;
};

// Adam with decoupled weight decay.  Moments are keyed by parameter name, so
// one instance can drive several disjoint parameter groups via `prefix`.
class AdamW {
 public:
  explicit AdamW(AdamWConfig cfg = {}) : cfg_(cfg) { cfg_.Validate(); }

  // Applies one update to every parameter under `prefix` that has a gradient.
  void Step(ParameterStore *params, std::string_view prefix, double lr);

  // Optimizer state under "adam/m/<name>", "adam/v/<name>" and
  // meta["adam_steps"][<name>].
  void Save(Container *c) const;
  void Load(const Container &c);

  const AdamWConfig &config() const { return cfg_; }

 private:
  struct Slot {
    Tensor m, v;
    int64_t t = 0;
  };
  AdamWConfig cfg_;
  std::map<std::string, Slot> slots_;
};

}  // namespace sfvoc

#endif  // SFVOC_OPTIMIZER_H_
