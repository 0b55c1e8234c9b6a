// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "ibio/tensor/tensor.hpp"

namespace ibio::tk {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 1e-16;
};

struct AdamState {
  Tensor m;
  Tensor v;
  std::int64_t t = 0;
};

/// One Adam step with decoupled weight decay applied to the parameter before
/// the moment update. With a zero gradient the parameter still shrinks by
/// exactly lr * weight_decay * theta.
void adam_step(Tensor& param, const Tensor& grad, AdamState& state,
               const AdamConfig& cfg);

/// Named-parameter convenience: one state per parameter name.
class AdamOptimizer {
 public:
  explicit AdamOptimizer(AdamConfig cfg) : cfg_(cfg) {}

  AdamConfig& config() { return cfg_; }
  const AdamConfig& config() const { return cfg_; }

  void step(const std::string& name, Tensor& param, const Tensor& grad) {
    AdamState& st = states_[name];
    if (st.t == 0) {
      st.m = Tensor::zeros(param.shape());
      st.v = Tensor::zeros(param.shape());
    }
    adam_step(param, grad, st, cfg_);
  }

  void reset() { states_.clear(); }

 private:
  AdamConfig cfg_;
  std::map<std::string, AdamState> states_;
};

}  // namespace ibio::tk
