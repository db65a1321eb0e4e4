// include/sfvoc/autograd.h

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

#ifndef SFVOC_AUTOGRAD_H_
#define SFVOC_AUTOGRAD_H_

#include <functional>
#include <memory>
#include <vector>

#include "sfvoc/tensor.h"

namespace sfvoc {

// A node of the reverse-mode tape.  `backward` reads `grad` of this node and
// accumulates into the parents' gradients; it receives the node itself so the
// closure never owns a reference back to it.
struct Node {
  Tensor value;
  Tensor grad;
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node &)> backward;

  Tensor &Grad();  // allocates zeros on first use
  void ZeroGrad();
};

class Var {
 public:
  Var() = default;
  explicit Var(Tensor value, bool requires_grad = false);
  explicit Var(std::shared_ptr<Node> node) : node_(std::move(node)) {}

  const Tensor &value() const { return node_->value; }
  Tensor &mutable_value() { return node_->value; }
  const Shape &shape() const { return node_->value.shape; }
  int64_t size() const { return node_->value.size(); }
  bool requires_grad() const { return node_ && node_->requires_grad; }
  bool defined() const { return static_cast<bool>(node_); }
  const std::shared_ptr<Node> &node() const { return node_; }

  // Gradient accumulated by Backward(); empty when never reached.
  const Tensor &grad() const { return node_->grad; }

  double item() const;

 private:
  std::shared_ptr<Node> node_;
};

// Runs reverse-mode accumulation from a scalar root (seed gradient 1).
void Backward(const Var &root);

// Disables tape recording on the current thread for its lifetime.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard &) = delete;
  NoGradGuard &operator=(const NoGradGuard &) = delete;

 private:
  bool previous_;
};

bool GradEnabled();

// Builds the result of an op.  The backward function is only kept when
// recording is enabled and at least one input requires a gradient.
Var MakeResult(Tensor value, std::vector<Var> inputs,
               std::function<void(Node &)> backward);

// Accumulate helper used by op closures: parents[i]->Grad() if it is tracked.
inline Tensor *GradIfTracked(Node &self, size_t i) {
  Node &p = *self.parents[i];
  return p.requires_grad ? &p.Grad() : nullptr;
}

}  // namespace sfvoc

#endif  // SFVOC_AUTOGRAD_H_
