// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include "ibio/verify/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "ibio/data/synthetic.hpp"
#include "ibio/metrics/metrics.hpp"
#include "ibio/models/graph_batch.hpp"
#include "ibio/tensor/grad_check.hpp"
#include "ibio/tensor/ops.hpp"

namespace ibio::verify {

namespace op = tk::ops;

double pair_count_auc(const std::vector<double>& scores,
                      const std::vector<int>& labels) {
  double wins = 0.0;
  long pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] == 0) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      ++pairs;
      if (scores[i] > scores[j]) {
        wins += 1.0;
      } else if (scores[i] == scores[j]) {
        wins += 0.5;
      }
    }
  }
  return wins / static_cast<double>(pairs);
}

namespace {

double scalar_elem(train::LossKind kind, double pred, double target) {
  switch (kind) {
    case train::LossKind::kMse: {
      const double d = pred - target;
      return d * d;
    }
    case train::LossKind::kMae: return std::fabs(pred - target);
    case train::LossKind::kBce: {
      // -[c ln sigma(z) + (1-c) ln(1 - sigma(z))], evaluated directly.
      const double z = pred;
      const double s = 1.0 / (1.0 + std::exp(-z));
      return -(target * std::log(s) + (1.0 - target) * std::log(1.0 - s));
    }
  }
  return 0.0;
}

}  // namespace

OracleLosses scalar_loop_losses(const train::BatchDetail& d) {
  OracleLosses out;
  const int B = d.n_labeled + d.n_pseudo;
  for (int r = 0; r < B; ++r) {
    double h = 0.0;
    int cnt = 0;
    for (int t = 0; t < d.n_tasks; ++t) {
      const std::size_t idx = static_cast<std::size_t>(r) * d.n_tasks + t;
      if (!d.mask[idx]) continue;
      h += scalar_elem(d.loss, d.preds[idx], d.targets[idx]);
      ++cnt;
    }
    if (cnt > 0) h /= cnt;

    const double p = d.confidence[r];
    if (d.observed[r]) {
      const double w = d.lambda > 0.0 ? 1.0 + d.lambda * p : 1.0;
      out.loss_f += w * h;
      out.loss_g += -std::log(std::max(p, 1e-300));
    } else {
      double w = 2.0 * p - 1.0;
      if (d.floor_pseudo_weight) w = std::max(0.0, w);
      out.loss_f += d.alpha * w * h;
      out.loss_g += -std::log(std::max(1.0 - p, 1e-300));
    }
  }
  return out;
}

namespace {

using models::GraphBatch;
using models::InstructorModel;
using models::TargetModel;

std::vector<const chem::MolGraph*> sample_graphs(
    const std::vector<data::GeneratedMolecule>& mols) {
  std::vector<const chem::MolGraph*> out;
  for (const auto& m : mols) out.push_back(&m.graph);
  return out;
}

/// Finite-difference check of one target-model configuration on a few random
/// molecules.
CheckResult check_target_gradients(int n_layers, models::Readout readout,
                                   const std::string& corrupt) {
  CheckResult result;
  result.name = "grad/gin-l" + std::to_string(n_layers) + "-" +
                models::readout_to_string(readout);
  result.threshold = 1e-4;

  models::TargetModelConfig cfg;
  cfg.n_layers = n_layers;
  cfg.node_hidden = 32;
  cfg.edge_hidden = 16;
  cfg.head_layers = 2;
  cfg.dropout = 0.0;  // finite differences need a deterministic closure
  cfg.readout = readout;
  cfg.n_tasks = 2;
  TargetModel model = TargetModel::init(cfg, 911 + n_layers);
  if (readout == models::Readout::kAttention) {
    // Keep the attention scores in a smooth softmax regime; the saturated
    // one-hot regime has vanishing gradients that finite differences cannot
    // resolve at eps = 1e-5.
    for (auto& v : model.params().at("readout/att/W").values()) v *= 0.05;
  }

  data::MoleculeGenConfig gen;
  gen.min_atoms = 4;
  gen.max_atoms = 9;
  tk::SeededRng rng(1234 + n_layers);
  tk::RngStream stream = rng.stream("gradcheck/mols");
  std::vector<data::GeneratedMolecule> mols;
  for (int i = 0; i < 3; ++i) mols.push_back(data::random_molecule(gen, stream));
  GraphBatch batch = GraphBatch::build(sample_graphs(mols));

  tk::Tensor targets({3, 2});
  tk::RngStream ts = rng.stream("gradcheck/targets");
  for (auto& v : targets.values()) v = ts.uniform(-1.0, 1.0);

  auto loss_of = [&](tk::ParamStore&) {
    tk::Tape tape;
    models::StochasticCtx ctx;
    models::TargetForward fwd = model.forward(tape, batch, ctx);
    tk::Var loss = op::mean_all(op::mse_elems(fwd.predictions, targets));
    return tape.value(loss).item();
  };
  auto grads_of = [&](tk::ParamStore& params) {
    tk::Tape tape;
    tk::ParamBinding binding(tape, params);
    models::StochasticCtx ctx;
    models::TargetForward fwd = model.forward(tape, binding, batch, ctx);
    tk::Var loss = op::mean_all(op::mse_elems(fwd.predictions, targets));
    tape.backward(loss);
    auto g = binding.grads();
    if (corrupt == result.name && !g.empty()) {
      g.begin()->second[0] += 0.5;  // injected fault
    }
    return g;
  };

  tk::GradCheckReport report =
      tk::grad_check(loss_of, grads_of, model.params(), 1e-5, 1e-4);
  result.ok = report.all_ok;
  result.value = report.worst_rel_err;
  result.detail = report.worst_param;
  return result;
}

CheckResult check_instructor_gradients(const std::string& corrupt) {
  CheckResult result;
  result.name = "grad/instructor-mlp";
  result.threshold = 1e-4;

  models::InstructorConfig cfg;
  cfg.embedding_dim = 16;
  cfg.n_tasks = 2;
  cfg.hidden = 24;
  InstructorModel g = InstructorModel::init(cfg, 77);
  // Move the zero-initialized head off zero so gradients are nontrivial.
  tk::SeededRng rng(78);
  tk::RngStream ws = rng.stream("instructor/out");
  for (auto& v : g.params().at("g/out/W").values()) v = ws.uniform(-0.3, 0.3);

  const std::size_t n = 5;
  tk::Tensor inputs({n, static_cast<std::size_t>(cfg.input_dim())});
  tk::Tensor c({n, 1});
  tk::RngStream is = rng.stream("instructor/inputs");
  for (auto& v : inputs.values()) v = is.uniform(-1.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) c[i] = i % 2 == 0 ? 1.0 : 0.0;

  auto loss_of = [&](tk::ParamStore&) {
    tk::Tape tape;
    models::InstructorForward fwd = g.forward(tape, inputs);
    tk::Var loss = op::mean_all(op::bce_with_logits(fwd.logit, c));
    return tape.value(loss).item();
  };
  auto grads_of = [&](tk::ParamStore& params) {
    tk::Tape tape;
    tk::ParamBinding binding(tape, params);
    models::InstructorForward fwd = g.forward(tape, binding, inputs);
    tk::Var loss = op::mean_all(op::bce_with_logits(fwd.logit, c));
    tape.backward(loss);
    auto grads = binding.grads();
    if (corrupt == result.name && !grads.empty()) {
      grads.begin()->second[0] += 0.5;
    }
    return grads;
  };

  tk::GradCheckReport report =
      tk::grad_check(loss_of, grads_of, g.params(), 1e-5, 1e-4);
  result.ok = report.all_ok;
  result.value = report.worst_rel_err;
  result.detail = report.worst_param;
  return result;
}

CheckResult check_loss_oracles() {
  CheckResult result;
  result.name = "loss/eq1-eq2-oracle";
  result.threshold = 1e-10;

  data::SyntheticFixtureConfig fcfg;
  fcfg.n_labeled = 24;
  fcfg.n_val = 8;
  fcfg.n_test = 4;
  fcfg.n_unlabeled = 60;
  fcfg.seed = 5150;
  data::SyntheticFixture fx = data::make_synthetic_fixture(fcfg);

  models::TargetModelConfig mcfg;
  mcfg.n_layers = 2;
  mcfg.node_hidden = 32;
  mcfg.edge_hidden = 16;
  mcfg.dropout = 0.2;
  TargetModel f = TargetModel::init(mcfg, 31);
  models::InstructorConfig gcfg;
  gcfg.embedding_dim = mcfg.node_hidden;
  gcfg.n_tasks = 1;
  gcfg.hidden = 32;
  InstructorModel g = InstructorModel::init(gcfg, 32);

  train::TrainConfig tcfg;
  tcfg.epochs = 2;
  tcfg.batch = 16;
  tcfg.lr = 1e-3;
  tcfg.k = 1;
  tcfg.alpha = 0.3;
  tcfg.lambda = 0.5;  // exercise the labeled weight too
  tcfg.pretrain_f_epochs = 0;
  tcfg.pretrain_g_epochs = 0;
  tcfg.early_stop_patience = 0;
  tcfg.plateau_lr_patience = 0;
  tcfg.seed = 99;

  double worst = 0.0;
  long batches = 0;
  train::RunOptions opts;
  opts.mode = train::TrainMode::kInstructBio;
  opts.run_pretrain_f = false;
  opts.run_pretrain_g = false;
  opts.on_batch = [&](const train::BatchDetail& d) {
    const OracleLosses oracle = scalar_loop_losses(d);
    worst = std::max(worst, std::fabs(oracle.loss_f - d.loss_f_sum));
    worst = std::max(worst, std::fabs(oracle.loss_g - d.loss_g_sum));
    ++batches;
  };

  train::TrainTask task;
  task.train = &fx.train;
  task.val = &fx.val;
  task.pool = &fx.pool;
  (void)train::run_training(std::move(f), std::move(g), task, tcfg, opts);

  result.ok = worst < result.threshold && batches > 0;
  result.value = worst;
  result.detail = std::to_string(batches) + " batches";
  return result;
}

CheckResult check_metric_oracles() {
  CheckResult result;
  result.name = "metric/roc-auc-pair-count";
  result.threshold = 0.0;

  tk::SeededRng rng(4242);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    tk::RngStream s = rng.stream("metric/trial", trial);
    const int n = 5 + static_cast<int>(s.next_below(60));
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    bool has_pos = false, has_neg = false;
    for (int i = 0; i < n; ++i) {
      // Coarse grid so ties actually happen.
      scores[i] = std::floor(s.uniform(0.0, 8.0)) / 8.0;
      labels[i] = s.next_double() < 0.5 ? 1 : 0;
      has_pos = has_pos || labels[i] == 1;
      has_neg = has_neg || labels[i] == 0;
    }
    if (!has_pos) labels[0] = 1;
    if (!has_neg) labels[n - 1] = 0;
    const double fast = metrics::roc_auc(scores, labels);
    const double slow = pair_count_auc(scores, labels);
    worst = std::max(worst, std::fabs(fast - slow));
  }
  result.ok = worst == 0.0;
  result.value = worst;
  return result;
}

}  // namespace

std::vector<CheckResult> run_selftest(const SelftestOptions& opts) {
  std::vector<CheckResult> results;
  for (int layers : {2, 3, 4}) {
    results.push_back(check_target_gradients(layers, models::Readout::kMean,
                                             opts.corrupt_gradient_op));
  }
  results.push_back(check_target_gradients(2, models::Readout::kSum,
                                           opts.corrupt_gradient_op));
  results.push_back(check_target_gradients(2, models::Readout::kAttention,
                                           opts.corrupt_gradient_op));
  results.push_back(check_instructor_gradients(opts.corrupt_gradient_op));
  results.push_back(check_loss_oracles());
  results.push_back(check_metric_oracles());
  return results;
}

}  // namespace ibio::verify
