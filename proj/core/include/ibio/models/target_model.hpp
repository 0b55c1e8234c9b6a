// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

#include "ibio/models/graph_batch.hpp"
#include "ibio/tensor/param_store.hpp"

namespace ibio::models {

enum class Readout { kMean, kSum, kAttention };

Readout readout_from_string(const std::string& s);
std::string readout_to_string(Readout r);

struct TargetModelConfig {
  int n_layers = 3;      // 2..6
  int node_hidden = 64;  // 32..512
  int edge_hidden = 64;  // 64..256
  int head_layers = 2;   // 1..2
  double dropout = 0.2;  // [0, 0.5]; 0 disables
  Readout readout = Readout::kMean;
  int n_tasks = 1;
  int feature_dim = chem::kAtomFeatureDim;

  /// Throws ConfigError when a field leaves its documented range.
  void validate() const;
};

/// Per-pass context for stochastic layers. Dropout masks are keyed by
/// (label, epoch, step), never by call order, so identical schedules draw
/// identical masks regardless of what else ran.
struct StochasticCtx {
  bool train = false;
  const tk::SeededRng* rng = nullptr;
  std::uint64_t epoch = 0;
  std::uint64_t step = 0;
  std::string label = "f";
};

struct TargetForward {
  tk::Var graph_embeddings;  // [n_graphs, node_hidden]
  tk::Var predictions;       // [n_graphs, n_tasks]; logits for classification
};

/// GIN-style message-passing model: per layer, neighbor features plus a
/// projected bond embedding are segment-summed into each atom, combined as
/// (1 + eps) * h_v + m_v and passed through a two-layer MLP. Readout pools
/// atoms per graph (mean, sum, or single-query attention); a small head maps
/// the graph embedding to per-task outputs.
class TargetModel {
 public:
  TargetModel() = default;
  static TargetModel init(const TargetModelConfig& cfg, std::uint64_t seed);

  const TargetModelConfig& config() const { return cfg_; }
  tk::ParamStore& params() { return params_; }
  const tk::ParamStore& params() const { return params_; }
  std::uint64_t init_seed() const { return init_seed_; }

  /// Stable identifier recorded in hybrid-database provenance.
  std::string model_id() const;

  /// Forward pass binding parameters onto the caller's tape; after
  /// tape.backward(), binding.bound() maps parameter names to gradient vars.
  TargetForward forward(tk::Tape& tape, tk::ParamBinding& binding,
                        const GraphBatch& batch, const StochasticCtx& ctx);

  /// Eval-style convenience overload with a throwaway binding.
  TargetForward forward(tk::Tape& tape, const GraphBatch& batch,
                        const StochasticCtx& ctx) {
    tk::ParamBinding binding(tape, params_);
    return forward(tape, binding, batch, ctx);
  }

 private:
  TargetModelConfig cfg_;
  tk::ParamStore params_;
  std::uint64_t init_seed_ = 0;
};

}  // namespace ibio::models
