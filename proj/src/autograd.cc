// src/autograd.cc

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

#include "sfvoc/autograd.h"

#include <unordered_set>

#include "sfvoc/error.h"

namespace sfvoc {

namespace {
thread_local bool g_grad_enabled = true;
}  // namespace

Tensor &Node::Grad() {
  if (grad.data.size() != value.data.size()) grad = Tensor(value.shape, 0.0);
  return grad;
}

void Node::ZeroGrad() {
  if (!grad.empty()) grad.Fill(0.0);
}

Var::Var(Tensor value, bool requires_grad)
    : node_(std::make_shared<Node>()) {
  node_->value = std::move(value);
  node_->requires_grad = requires_grad;
}

double Var::item() const {
  SFVOC_CHECK(size() == 1, ErrorCode::kShapeMismatch,
              "item() on non-scalar " + ShapeString(shape()));
  return value().data[0];
}

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) {
  g_grad_enabled = false;
}
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

bool GradEnabled() { return g_grad_enabled; }

Var MakeResult(Tensor value, std::vector<Var> inputs,
               std::function<void(Node &)> backward) {
  auto node = std::make_shared<Node>();
  node->value = std::move(value);
  if (!g_grad_enabled) return Var(node);
  bool any = false;
  for (const Var &in : inputs) any = any || in.requires_grad();
  if (!any) return Var(node);
  node->requires_grad = true;
  node->parents.reserve(inputs.size());
  for (const Var &in : inputs) node->parents.push_back(in.node());
  node->backward = std::move(backward);
  return Var(node);
}

void Backward(const Var &root) {
  SFVOC_CHECK(root.defined() && root.size() == 1, ErrorCode::kShapeMismatch,
              "Backward() needs a scalar root");
  if (!root.requires_grad()) return;

  // Iterative post-order DFS gives a topological order.
  std::vector<Node *> order;
  std::unordered_set<Node *> visited;
  std::vector<std::pair<Node *, size_t>> stack;
  stack.emplace_back(root.node().get(), 0);
  visited.insert(root.node().get());
  while (!stack.empty()) {
    auto &[node, next] = stack.back();
    if (next < node->parents.size()) {
      Node *p = node->parents[next++].get();
      if (p->requires_grad && !visited.count(p)) {
        visited.insert(p);
        stack.emplace_back(p, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  root.node()->Grad().data[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node *n = *it;
    if (n->backward && !n->grad.empty()) n->backward(*n);
  }
}

}  // namespace sfvoc
