// src/params.cc

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

#include "sfvoc/params.h"

#include "sfvoc/error.h"

namespace sfvoc {

namespace {
bool HasPrefix(const std::string &s, std::string_view prefix) {
  return s.compare(0, prefix.size(), prefix) == 0;
}
}  // namespace

Var ParameterStore::Add(const std::string &name, Tensor init) {
  SFVOC_CHECK(!entries_.count(name), ErrorCode::kInvalidArgument,
              "duplicate parameter " + name);
  auto node = std::make_shared<Node>();
  node->value = std::move(init);
  node->requires_grad = true;
  entries_[name] = node;
  return Var(node);
}

Var ParameterStore::Get(const std::string &name) const {
  auto it = entries_.find(name);
  SFVOC_CHECK(it != entries_.end(), ErrorCode::kConfigMismatch,
              "missing parameter " + name);
  return Var(it->second);
}

std::vector<std::string> ParameterStore::Names(std::string_view prefix) const {
  std::vector<std::string> out;
  for (const auto &[name, node] : entries_)
    if (HasPrefix(name, prefix)) out.push_back(name);
  return out;
}

int64_t ParameterStore::NumValues(std::string_view prefix) const {
  int64_t n = 0;
  for (const auto &[name, node] : entries_)
    if (HasPrefix(name, prefix)) n += node->value.size();
  return n;
}

void ParameterStore::ZeroGrad(std::string_view prefix) {
  for (auto &[name, node] : entries_)
    if (HasPrefix(name, prefix)) node->ZeroGrad();
}

void ParameterStore::SetRequiresGrad(std::string_view prefix, bool requires_grad) {
  for (auto &[name, node] : entries_)
    if (HasPrefix(name, prefix)) node->requires_grad = requires_grad;
}

bool ParameterStore::AllFinite() const {
  for (const auto &[name, node] : entries_)
    if (!node->value.AllFinite()) return false;
  return true;
}

Tensor TruncatedNormal(const Shape &shape, double std, std::mt19937_64 &rng) {
  Tensor t(shape);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (double &v : t.data) {
    double z;
    do {
      z = gauss(rng);
    } while (z < -2.0 || z > 2.0);
    v = std * z;
  }
  return t;
}

}  // namespace sfvoc
