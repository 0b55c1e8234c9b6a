// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "ibio/tensor/param_store.hpp"

namespace ibio::models {

struct InstructorConfig {
  int embedding_dim = 64;  // width of the target model's graph embedding
  int n_tasks = 1;
  int hidden = 64;  // two hidden layers of this width

  int input_dim() const { return embedding_dim + n_tasks + 1; }
  void validate() const;
};

struct InstructorForward {
  tk::Var logit;       // [n, 1]
  tk::Var confidence;  // sigmoid(logit), in (0,1)
};

/// Confidence scorer g: an MLP over [graph embedding || label value ||
/// per-sample loss] ending in a zero-initialized linear layer, so a fresh
/// instructor outputs exactly p = 0.5 everywhere. Inputs are detached
/// tensors; gradients reach only the instructor's parameters.
class InstructorModel {
 public:
  InstructorModel() = default;
  static InstructorModel init(const InstructorConfig& cfg, std::uint64_t seed);

  const InstructorConfig& config() const { return cfg_; }
  tk::ParamStore& params() { return params_; }
  const tk::ParamStore& params() const { return params_; }

  /// inputs: [n, embedding_dim + n_tasks + 1] constants.
  InstructorForward forward(tk::Tape& tape, tk::ParamBinding& binding,
                            const tk::Tensor& inputs);

  InstructorForward forward(tk::Tape& tape, const tk::Tensor& inputs) {
    tk::ParamBinding binding(tape, params_);
    return forward(tape, binding, inputs);
  }

 private:
  InstructorConfig cfg_;
  tk::ParamStore params_;
};

/// Assembles the instructor input row block from detached pieces.
tk::Tensor instructor_inputs(const tk::Tensor& graph_embeddings,
                             const tk::Tensor& label_values,
                             const tk::Tensor& per_sample_loss);

}  // namespace ibio::models
