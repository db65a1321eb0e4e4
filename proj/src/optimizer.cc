// src/optimizer.cc

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

#include "sfvoc/optimizer.h"

#include <cmath>

#include "sfvoc/error.h"

namespace sfvoc {

void AdamWConfig::Validate() const {
  SFVOC_CHECK(beta1 >= 0 && beta1 < 1 && beta2 >= 0 && beta2 < 1,
              ErrorCode::kInvalidArgument, "adam betas must lie in [0, 1)");
  SFVOC_CHECK(eps > 0 && weight_decay >= 0, ErrorCode::kInvalidArgument,
              "adam eps must be positive and weight decay non-negative");
}

void AdamW::Step(ParameterStore *params, std::string_view prefix, double lr) {
  for (const auto &[name, node] : params->entries()) {
    if (!name.starts_with(prefix) || node->grad.empty()) continue;
    Tensor &p = node->value;
    const Tensor &g = node->grad;
    SFVOC_CHECK(g.shape == p.shape, ErrorCode::kShapeMismatch,
                "gradient shape mismatch for " + name);
    Slot &s = slots_[name];
    if (s.m.empty()) {
      s.m = Tensor(p.shape);
      s.v = Tensor(p.shape);
    }
    ++s.t;
    const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(s.t));
    const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(s.t));
    const double decay = 1.0 - lr * cfg_.weight_decay;
    for (int64_t i = 0; i < p.size(); ++i) {
      s.m.data[i] = cfg_.beta1 * s.m.data[i] + (1 - cfg_.beta1) * g.data[i];
      s.v.data[i] = cfg_.beta2 * s.v.data[i] + (1 - cfg_.beta2) * g.data[i] * g.data[i];
      const double mhat = s.m.data[i] / c1;
      const double vhat = s.v.data[i] / c2;
      p.data[i] = p.data[i] * decay - lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
  }
}

void AdamW::Save(Container *c) const {
  nlohmann::json steps = nlohmann::json::object();
  for (const auto &[name, s] : slots_) {
    c->arrays["adam/m/" + name] = s.m;
    c->arrays["adam/v/" + name] = s.v;
    steps[name] = s.t;
  }
  c->meta["adam_steps"] = steps;
}

void AdamW::Load(const Container &c) {
  slots_.clear();
  SFVOC_CHECK(c.meta.contains("adam_steps"), ErrorCode::kCorrupt,
              "checkpoint lacks optimizer state");
  for (const auto &[name, t] : c.meta.at("adam_steps").items()) {
    auto m = c.arrays.find("adam/m/" + name);
    auto v = c.arrays.find("adam/v/" + name);
    SFVOC_CHECK(m != c.arrays.end() && v != c.arrays.end(), ErrorCode::kCorrupt,
                "missing optimizer moments for " + name);
    slots_[name] = Slot{m->second, v->second, t.get<int64_t>()};
  }
}

}  // namespace sfvoc
