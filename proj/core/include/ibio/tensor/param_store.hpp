// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "ibio/tensor/rng.hpp"
#include "ibio/tensor/tape.hpp"

namespace ibio::tk {

/// Ordered collection of named parameter tensors. std::map iteration order is
/// the name order, which keeps every walk over parameters deterministic.
class ParamStore {
 public:
  Tensor& add(const std::string& name, Tensor init) {
    if (values_.count(name)) {
      raise(ErrorCode::kDuplicateKey, "parameter " + name);
    }
    return values_.emplace(name, std::move(init)).first->second;
  }

  Tensor& at(const std::string& name) {
    auto it = values_.find(name);
    if (it == values_.end()) {
      raise(ErrorCode::kConfigError, "unknown parameter " + name);
    }
    return it->second;
  }
  const Tensor& at(const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end()) {
      raise(ErrorCode::kConfigError, "unknown parameter " + name);
    }
    return it->second;
  }

  bool contains(const std::string& name) const { return values_.count(name) > 0; }
  std::size_t size() const { return values_.size(); }

  std::map<std::string, Tensor>& entries() { return values_; }
  const std::map<std::string, Tensor>& entries() const { return values_; }

  /// Kaiming-style uniform fan-in init, seed-deterministic per name.
  Tensor& add_kaiming(const std::string& name, std::size_t fan_in,
                      std::vector<std::size_t> shape, const SeededRng& rng) {
    Tensor t(std::move(shape));
    RngStream s = rng.stream("init/" + name);
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
    for (double& v : t.values()) v = s.uniform(-bound, bound);
    return add(name, std::move(t));
  }

  Tensor& add_zeros(const std::string& name, std::vector<std::size_t> shape) {
    return add(name, Tensor::zeros(std::move(shape)));
  }

 private:
  std::map<std::string, Tensor> values_;
};

/// Binding of a ParamStore onto a Tape for one forward/backward pass.
class ParamBinding {
 public:
  ParamBinding(Tape& tape, ParamStore& store) : tape_(&tape), store_(&store) {}

  Var operator[](const std::string& name) {
    auto it = vars_.find(name);
    if (it != vars_.end()) return it->second;
    Var v = tape_->leaf(store_->at(name));
    vars_.emplace(name, v);
    return v;
  }

  /// Gradients for every parameter touched during the pass.
  std::map<std::string, Tensor> grads() {
    std::map<std::string, Tensor> out;
    for (auto& [name, var] : vars_) out.emplace(name, tape_->grad(var));
    return out;
  }

  const std::map<std::string, Var>& bound() const { return vars_; }

 private:
  Tape* tape_;
  ParamStore* store_;
  std::map<std::string, Var> vars_;
};

}  // namespace ibio::tk
