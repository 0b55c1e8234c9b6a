// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include "ibio/models/target_model.hpp"

#include "ibio/common/error.hpp"
#include "ibio/tensor/ops.hpp"

namespace ibio::models {

namespace op = tk::ops;

Readout readout_from_string(const std::string& s) {
  if (s == "mean") return Readout::kMean;
  if (s == "sum") return Readout::kSum;
  if (s == "attention") return Readout::kAttention;
  raise(ErrorCode::kConfigError, "unknown readout '" + s + "'");
}

std::string readout_to_string(Readout r) {
  switch (r) {
    case Readout::kMean: return "mean";
    case Readout::kSum: return "sum";
    case Readout::kAttention: return "attention";
  }
  return "mean";
}

void TargetModelConfig::validate() const {
  if (n_layers < 2 || n_layers > 6) {
    raise(ErrorCode::kConfigError, "n_layers must be in [2,6]");
  }
  if (node_hidden < 32 || node_hidden > 512) {
    raise(ErrorCode::kConfigError, "node_hidden must be in [32,512]");
  }
  if (edge_hidden < 16 || edge_hidden > 256) {
    raise(ErrorCode::kConfigError, "edge_hidden must be in [16,256]");
  }
  if (head_layers < 1 || head_layers > 2) {
    raise(ErrorCode::kConfigError, "head_layers must be 1 or 2");
  }
  if (dropout < 0.0 || dropout > 0.5) {
    raise(ErrorCode::kConfigError, "dropout must be in [0,0.5]");
  }
  if (n_tasks < 1) raise(ErrorCode::kConfigError, "n_tasks must be >= 1");
}

TargetModel TargetModel::init(const TargetModelConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  TargetModel m;
  m.cfg_ = cfg;
  m.init_seed_ = seed;
  tk::SeededRng rng(seed);
  const auto H = static_cast<std::size_t>(cfg.node_hidden);
  const auto E = static_cast<std::size_t>(cfg.edge_hidden);
  const auto F = static_cast<std::size_t>(cfg.feature_dim);
  const auto T = static_cast<std::size_t>(cfg.n_tasks);

  m.params_.add_kaiming("embed/W", F, {F, H}, rng);
  m.params_.add_zeros("embed/b", {H});

  for (int l = 0; l < cfg.n_layers; ++l) {
    const std::string p = "gin" + std::to_string(l) + "/";
    m.params_.add_kaiming(p + "edge_table", 4, {4, E}, rng);
    m.params_.add_kaiming(p + "edge_proj/W", E, {E, H}, rng);
    m.params_.add_zeros(p + "edge_proj/b", {H});
    m.params_.add_zeros(p + "eps", {1});
    m.params_.add_kaiming(p + "mlp0/W", H, {H, H}, rng);
    m.params_.add_zeros(p + "mlp0/b", {H});
    m.params_.add_kaiming(p + "mlp1/W", H, {H, H}, rng);
    m.params_.add_zeros(p + "mlp1/b", {H});
  }

  if (cfg.readout == Readout::kAttention) {
    m.params_.add_kaiming("readout/att/W", H, {H, H}, rng);
    m.params_.add_kaiming("readout/att/q", H, {H, 1}, rng);
  }

  if (cfg.head_layers == 2) {
    m.params_.add_kaiming("head0/W", H, {H, H}, rng);
    m.params_.add_zeros("head0/b", {H});
    m.params_.add_kaiming("head1/W", H, {H, T}, rng);
    m.params_.add_zeros("head1/b", {T});
  } else {
    m.params_.add_kaiming("head1/W", H, {H, T}, rng);
    m.params_.add_zeros("head1/b", {T});
  }
  return m;
}

std::string TargetModel::model_id() const {
  return "gin-l" + std::to_string(cfg_.n_layers) + "-h" +
         std::to_string(cfg_.node_hidden) + "-s" + std::to_string(init_seed_);
}

namespace {

// Fixed per-column input scaling: count-valued features are mapped into
// [0, ~1] so no column dominates the embedding at init.
tk::Tensor scaled_features(const tk::Tensor& features) {
  tk::Tensor out = features;
  const std::size_t d = out.cols();
  for (std::size_t i = 0; i < out.rows(); ++i) {
    out.at(i, 26) /= 8.0;  // valence electrons
    out.at(i, 27) /= 4.0;  // bound hydrogens
    out.at(i, 28) /= 4.0;  // formal charge
  }
  (void)d;
  return out;
}

}  // namespace

TargetForward TargetModel::forward(tk::Tape& tape, tk::ParamBinding& P,
                                   const GraphBatch& batch,
                                   const StochasticCtx& ctx) {
  if (batch.n_graphs == 0) raise(ErrorCode::kEmptyBatch, "empty batch");
  const int n_atoms = static_cast<int>(batch.n_atoms());

  auto maybe_dropout = [&](tk::Var h, int layer) {
    if (!ctx.train || cfg_.dropout == 0.0 || ctx.rng == nullptr) return h;
    tk::RngStream stream = ctx.rng->stream(
        ctx.label + "/dropout/" + std::to_string(layer), ctx.epoch, ctx.step);
    return op::dropout(h, cfg_.dropout, stream, true);
  };

  tk::Var x = tape.constant(scaled_features(batch.atom_features));
  // Bounded activations keep sum aggregation and sum readout stable at any
  // molecule size.
  tk::Var h = op::tanh_op(op::add_rowvec(op::matmul(x, P["embed/W"]), P["embed/b"]));

  for (int l = 0; l < cfg_.n_layers; ++l) {
    const std::string p = "gin" + std::to_string(l) + "/";
    // Projected per-kind bond embeddings, gathered per directed edge.
    tk::Var kind_table = op::add_rowvec(
        op::matmul(P[p + "edge_table"], P[p + "edge_proj/W"]),
        P[p + "edge_proj/b"]);
    tk::Var edge_emb = op::index_gather(kind_table, batch.edge_kind);
    tk::Var neighbor = op::index_gather(h, batch.edge_src);
    tk::Var messages = op::segment_sum(op::add(neighbor, edge_emb),
                                       batch.edge_dst, n_atoms);
    // (1 + eps) * h_v + sum of messages, eps learnable from 0.
    tk::Var eps_h = op::scale_by_param(h, P[p + "eps"]);
    tk::Var combined = op::add(op::add(h, eps_h), messages);
    tk::Var z0 = op::tanh_op(op::add_rowvec(op::matmul(combined, P[p + "mlp0/W"]),
                                            P[p + "mlp0/b"]));
    tk::Var z1 = op::add_rowvec(op::matmul(z0, P[p + "mlp1/W"]), P[p + "mlp1/b"]);
    h = maybe_dropout(op::tanh_op(z1), l);
  }

  // Readout.
  tk::Var graph_emb{nullptr, -1};
  switch (cfg_.readout) {
    case Readout::kMean:
      graph_emb = op::segment_mean(h, batch.graph_id, batch.n_graphs);
      break;
    case Readout::kSum:
      graph_emb = op::segment_sum(h, batch.graph_id, batch.n_graphs);
      break;
    case Readout::kAttention: {
      tk::Var scores = op::matmul(op::tanh_op(op::matmul(h, P["readout/att/W"])),
                                  P["readout/att/q"]);
      tk::Var flat = op::reshape(scores, {batch.n_atoms()});
      tk::Var alpha = op::segment_softmax(flat, batch.graph_id, batch.n_graphs);
      tk::Var alpha_col =
          op::reshape(alpha, {batch.n_atoms(), static_cast<std::size_t>(1)});
      tk::Var weighted = op::mul_colvec(h, alpha_col);
      graph_emb = op::segment_sum(weighted, batch.graph_id, batch.n_graphs);
      break;
    }
  }

  // Head.
  tk::Var z = graph_emb;
  if (cfg_.head_layers == 2) {
    z = op::tanh_op(op::add_rowvec(op::matmul(z, P["head0/W"]), P["head0/b"]));
  }
  tk::Var preds = op::add_rowvec(op::matmul(z, P["head1/W"]), P["head1/b"]);
  return TargetForward{graph_emb, preds};
}

}  // namespace ibio::models
