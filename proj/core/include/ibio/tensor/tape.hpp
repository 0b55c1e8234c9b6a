// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "ibio/tensor/tensor.hpp"

namespace ibio::tk {

class Tape;

/// Handle to a node on a Tape. Cheap to copy; valid as long as the tape lives.
struct Var {
  Tape* tape = nullptr;
  int id = -1;

  bool valid() const { return tape != nullptr && id >= 0; }
};

/// Reverse-mode gradient record. Ops append nodes in execution order, which
/// is a topological order by construction; backward() walks it in reverse.
/// A Tape is single-threaded; run independent tapes for parallel work.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Leaf that participates in gradient computation (a model parameter).
  Var leaf(const Tensor& value) { return make_node(value, true); }

  /// Leaf treated as a constant (inputs, masks, detached values).
  Var constant(Tensor value) { return make_node(std::move(value), false); }

  Var make_node(Tensor value, bool requires_grad,
                std::function<void(Tape&, int)> backward_fn = nullptr) {
    nodes_.push_back(Node{std::move(value), Tensor{}, std::move(backward_fn),
                          requires_grad, false});
    return Var{this, static_cast<int>(nodes_.size()) - 1};
  }

  const Tensor& value(Var v) const { return nodes_[v.id].value; }
  Tensor& value(Var v) { return nodes_[v.id].value; }

  bool requires_grad(int id) const { return nodes_[id].requires_grad; }

  /// Gradient of a node after backward(); zeros if the node was not reached.
  const Tensor& grad(Var v) {
    ensure_grad(v.id);
    return nodes_[v.id].grad;
  }

  Tensor& ensure_grad(int id) {
    Node& n = nodes_[id];
    if (!n.grad_allocated) {
      n.grad = Tensor::zeros(n.value.shape());
      n.grad_allocated = true;
    }
    return n.grad;
  }

  bool grad_allocated(int id) const { return nodes_[id].grad_allocated; }

  /// Reverse-topological accumulation from a scalar loss node.
  void backward(Var loss) {
    if (!loss.valid() || loss.tape != this) {
      raise(ErrorCode::kNonScalarLoss, "backward on foreign or invalid node");
    }
    if (nodes_[loss.id].value.size() != 1) {
      raise(ErrorCode::kNonScalarLoss,
            "loss has shape " + nodes_[loss.id].value.shape_str());
    }
    ensure_grad(loss.id)[0] = 1.0;
    for (int id = loss.id; id >= 0; --id) {
      Node& n = nodes_[id];
      if (!n.requires_grad || !n.grad_allocated || !n.backward_fn) continue;
      n.backward_fn(*this, id);
    }
  }

  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    std::function<void(Tape&, int)> backward_fn;
    bool requires_grad = false;
    bool grad_allocated = false;
  };

  std::vector<Node> nodes_;
};

}  // namespace ibio::tk
