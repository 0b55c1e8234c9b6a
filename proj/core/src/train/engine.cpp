// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include "ibio/train/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <thread>

#include <json.hpp>

#include "ibio/chem/smiles.hpp"
#include "ibio/common/error.hpp"
#include "ibio/tensor/adam.hpp"
#include "ibio/tensor/ops.hpp"

namespace ibio::train {

namespace op = tk::ops;
using models::GraphBatch;
using models::InstructorModel;
using models::StochasticCtx;
using models::TargetModel;

TrainMode mode_from_string(const std::string& s) {
  if (s == "supervised") return TrainMode::kSupervised;
  if (s == "instructbio") return TrainMode::kInstructBio;
  if (s == "naive-pl") return TrainMode::kNaivePseudoLabel;
  if (s == "pi") return TrainMode::kPiModel;
  if (s == "ups") return TrainMode::kUps;
  if (s == "from-hybrid") return TrainMode::kFromHybrid;
  raise(ErrorCode::kConfigError, "unknown train mode '" + s + "'");
}

std::string mode_to_string(TrainMode m) {
  switch (m) {
    case TrainMode::kSupervised: return "supervised";
    case TrainMode::kInstructBio: return "instructbio";
    case TrainMode::kNaivePseudoLabel: return "naive-pl";
    case TrainMode::kPiModel: return "pi";
    case TrainMode::kUps: return "ups";
    case TrainMode::kFromHybrid: return "from-hybrid";
  }
  return "supervised";
}

std::string EpochReport::to_json_line() const {
  nlohmann::json j;
  j["epoch"] = epoch;
  j["loss_f"] = loss_f;
  j["loss_g"] = loss_g;
  j["val_metric"] = val_metric;
  j["mean_pseudo_confidence"] = mean_pseudo_confidence;
  j["frac_pseudo_confident"] = frac_pseudo_confident;
  j["pseudo_refreshed"] = pseudo_refreshed;
  j["lr"] = lr;
  return j.dump();
}

namespace {

int worker_count() {
  if (const char* env = std::getenv("IBIO_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 4u));
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const int workers = worker_count();
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  for (int w = 0; w < std::min<std::size_t>(workers, n); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

double sigmoid(double z) {
  return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z))
                  : std::exp(z) / (1.0 + std::exp(z));
}

/// Eval-mode forward over many molecules; model parameters are read-only, so
/// chunks run on independent tapes in parallel.
void forward_eval(TargetModel& f, const std::vector<const chem::MolGraph*>& graphs,
                  int eval_batch, tk::Tensor* preds_out, tk::Tensor* emb_out) {
  const std::size_t n = graphs.size();
  const auto T = static_cast<std::size_t>(f.config().n_tasks);
  const auto H = static_cast<std::size_t>(f.config().node_hidden);
  if (preds_out) *preds_out = tk::Tensor({n, T});
  if (emb_out) *emb_out = tk::Tensor({n, H});
  if (n == 0) return;
  const std::size_t n_chunks = (n + eval_batch - 1) / eval_batch;

  parallel_for(n_chunks, [&](std::size_t c) {
    const std::size_t lo = c * eval_batch;
    const std::size_t hi = std::min(n, lo + eval_batch);
    std::vector<const chem::MolGraph*> chunk(graphs.begin() + lo,
                                             graphs.begin() + hi);
    GraphBatch batch = GraphBatch::build(chunk);
    tk::Tape tape;
    StochasticCtx ctx;  // eval: dropout off
    models::TargetForward fwd = f.forward(tape, batch, ctx);
    const tk::Tensor& p = tape.value(fwd.predictions);
    const tk::Tensor& e = tape.value(fwd.graph_embeddings);
    if (preds_out)
      std::copy(p.data(), p.data() + p.size(), preds_out->data() + lo * T);
    if (emb_out)
      std::copy(e.data(), e.data() + e.size(), emb_out->data() + lo * H);
  });
}

std::vector<const chem::MolGraph*> graph_ptrs(const data::Dataset& ds) {
  std::vector<const chem::MolGraph*> out;
  out.reserve(ds.samples.size());
  for (const auto& s : ds.samples) out.push_back(&s.graph);
  return out;
}

metrics::MetricReport report_from_preds(const data::Dataset& ds,
                                        const tk::Tensor& preds,
                                        const data::Normalizer& norm,
                                        bool use_mae) {
  const int T = ds.task.n_tasks;
  std::vector<metrics::TaskScore> scores;
  for (int t = 0; t < T; ++t) {
    metrics::TaskScore ts;
    ts.task = t;
    if (ds.task.is_classification()) {
      std::vector<double> s;
      std::vector<int> y;
      for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        if (!ds.samples[i].mask[t]) continue;
        s.push_back(preds.at(i, t));
        y.push_back(ds.samples[i].labels[t] > 0.5 ? 1 : 0);
      }
      ts.evaluated_count = static_cast<long>(s.size());
      try {
        ts.value = metrics::roc_auc(s, y);
      } catch (const Error& e) {
        ts.valid = false;
        ts.note = e.what();
      }
    } else {
      std::vector<double> p, y;
      std::vector<std::uint8_t> m;
      for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        p.push_back(norm.invert(preds.at(i, t), t));
        y.push_back(ds.samples[i].labels[t]);
        m.push_back(ds.samples[i].mask[t]);
      }
      try {
        ts.value = use_mae ? metrics::mae(p, y, m) : metrics::rmse(p, y, m);
        ts.evaluated_count = static_cast<long>(std::count(m.begin(), m.end(), 1));
      } catch (const Error& e) {
        ts.valid = false;
        ts.note = e.what();
      }
    }
    scores.push_back(std::move(ts));
  }
  const std::string name =
      ds.task.is_classification() ? "roc_auc" : (use_mae ? "mae" : "rmse");
  return metrics::aggregate_multitask(name, std::move(scores));
}

struct PseudoRow {
  std::string smiles;
  const chem::MolGraph* graph = nullptr;
  std::vector<double> targets;  // normalized space / probabilities
  std::vector<std::uint8_t> mask;
  double stored_confidence = 1.0;
  double latest_confidence = 0.5;
  int assignment_epoch = 0;
};

class Trainer {
 public:
  Trainer(TargetModel f, std::optional<InstructorModel> g, const TrainTask& task,
          const TrainConfig& cfg, const RunOptions& opts)
      : f_(std::move(f)),
        g_(std::move(g)),
        task_(task),
        cfg_(cfg),
        opts_(opts),
        rng_(cfg.seed),
        f_opt_(make_adam(cfg)),
        g_opt_(make_adam(cfg)) {
    cfg_.validate();
    if (!task_.train || !task_.val) {
      raise(ErrorCode::kConfigError, "train and val datasets are required");
    }
    validate_loss_for_task(cfg_.loss, task_.train->task.kind);
    norm_ = data::Normalizer::fit(*task_.train);
    for (const auto& s : task_.train->samples) {
      labeled_norm_.push_back(task_.train->task.is_classification()
                                  ? s.labels
                                  : norm_.apply_row(s.labels));
    }
    if (opts_.external_embeddings &&
        opts_.external_embeddings->width() != f_.config().node_hidden) {
      raise(ErrorCode::kWidthMismatch,
            "external embedding width " +
                std::to_string(opts_.external_embeddings->width()) +
                " != node_hidden " + std::to_string(f_.config().node_hidden));
    }
  }

  RunArtifacts run();
  void set_pseudo_rows(std::vector<PseudoRow> rows) { pseudo_ = std::move(rows); }
  const data::Normalizer& normalizer() const { return norm_; }

 private:
  static tk::AdamConfig make_adam(const TrainConfig& cfg) {
    tk::AdamConfig a;
    a.lr = cfg.lr;
    a.weight_decay = cfg.weight_decay;
    return a;
  }

  void warn(const std::string& msg) {
    if (opts_.on_warning) opts_.on_warning(msg);
  }

  bool has_pseudo_labels() const {
    return opts_.mode == TrainMode::kInstructBio ||
           opts_.mode == TrainMode::kNaivePseudoLabel ||
           opts_.mode == TrainMode::kUps || opts_.mode == TrainMode::kFromHybrid;
  }

  bool refresh_each_k() const {
    return (opts_.mode == TrainMode::kInstructBio ||
            opts_.mode == TrainMode::kNaivePseudoLabel ||
            opts_.mode == TrainMode::kUps) &&
           task_.pool && !task_.pool->empty();
  }

  // ---- schedule ------------------------------------------------------------

  struct Plan {
    std::vector<int> labeled;
    std::vector<int> pseudo;
  };

  static void shuffle(std::vector<int>& v, tk::RngStream& s) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[s.next_below(i)]);
    }
  }

  /// Number of pseudo/unlabeled rows the schedule interleaves. A supervised
  /// run given a pool keeps the mixed-schedule shape (the degeneracy tests
  /// compare against it) while contributing nothing from those rows.
  int scheduled_extra_count() const {
    if (opts_.mode == TrainMode::kPiModel ||
        opts_.mode == TrainMode::kSupervised) {
      return task_.pool ? static_cast<int>(task_.pool->size()) : 0;
    }
    return static_cast<int>(pseudo_.size());
  }

  std::vector<Plan> make_schedule(int epoch) {
    const int N = static_cast<int>(task_.train->samples.size());
    const int M = scheduled_extra_count();
    std::vector<Plan> plans;

    std::vector<int> labeled_ids(N);
    for (int i = 0; i < N; ++i) labeled_ids[i] = i;
    tk::RngStream ls = rng_.stream("sched/labeled", epoch);
    shuffle(labeled_ids, ls);

    if (M == 0) {
      for (int at = 0; at < N; at += cfg_.batch) {
        Plan p;
        for (int i = at; i < std::min(N, at + cfg_.batch); ++i)
          p.labeled.push_back(labeled_ids[i]);
        plans.push_back(std::move(p));
      }
      return plans;
    }

    // Stratify each batch to the global labeled:pseudo ratio with at least
    // one labeled row, so the instructor loss always sees both classes.
    const int quota_l = std::max(
        1, static_cast<int>(std::llround(static_cast<double>(cfg_.batch) * N /
                                         static_cast<double>(N + M))));
    const int quota_p = std::max(1, cfg_.batch - quota_l);
    const int steps = (M + quota_p - 1) / quota_p;

    std::vector<int> pseudo_ids(M);
    for (int i = 0; i < M; ++i) pseudo_ids[i] = i;
    tk::RngStream ps = rng_.stream("sched/pseudo", epoch);
    shuffle(pseudo_ids, ps);

    int lab_cursor = 0;
    int cycle = 0;
    int pse_cursor = 0;
    for (int s = 0; s < steps; ++s) {
      Plan p;
      for (int i = 0; i < quota_l; ++i) {
        if (lab_cursor == N) {
          lab_cursor = 0;
          ++cycle;
          tk::RngStream cs = rng_.stream("sched/labeled", epoch, cycle);
          shuffle(labeled_ids, cs);
        }
        p.labeled.push_back(labeled_ids[lab_cursor++]);
      }
      for (int i = 0; i < quota_p && pse_cursor < M; ++i) {
        p.pseudo.push_back(pseudo_ids[pse_cursor++]);
      }
      plans.push_back(std::move(p));
    }
    return plans;
  }

  // ---- pseudo labels -------------------------------------------------------

  void refresh_pseudo_labels(int epoch) {
    if (opts_.mode == TrainMode::kUps) {
      refresh_ups_selection(epoch);
      return;
    }
    std::vector<data::PseudoLabeledSample> assigned =
        assign_pseudo_labels(f_, *task_.pool, task_.train->task.kind, epoch);
    pseudo_.clear();
    pseudo_.reserve(assigned.size());
    for (std::size_t i = 0; i < assigned.size(); ++i) {
      PseudoRow row;
      row.smiles = assigned[i].smiles;
      row.graph = &task_.pool->graphs[i];
      row.targets = std::move(assigned[i].pseudo_labels);
      row.mask.assign(row.targets.size(), 1);
      row.assignment_epoch = epoch;
      pseudo_.push_back(std::move(row));
    }
  }

  void refresh_ups_selection(int epoch) {
    tk::Tensor preds;
    std::vector<const chem::MolGraph*> graphs;
    for (const auto& g : task_.pool->graphs) graphs.push_back(&g);
    forward_eval(f_, graphs, 256, &preds, nullptr);
    const int T = f_.config().n_tasks;
    pseudo_.clear();
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      PseudoRow row;
      row.targets.assign(T, 0.0);
      row.mask.assign(T, 0);
      bool any = false;
      for (int t = 0; t < T; ++t) {
        const double prob = sigmoid(preds.at(i, t));
        if (prob >= cfg_.ups_gamma1) {
          row.targets[t] = 1.0;
          row.mask[t] = 1;
          any = true;
        } else if (prob <= cfg_.ups_gamma2) {
          row.targets[t] = 0.0;
          row.mask[t] = 1;
          any = true;
        }
      }
      if (!any) continue;
      row.smiles = task_.pool->smiles[i];
      row.graph = &task_.pool->graphs[i];
      row.assignment_epoch = epoch;
      pseudo_.push_back(std::move(row));
    }
  }

  // ---- training steps ------------------------------------------------------

  struct StepResult {
    double loss_f_sum = 0.0;
    double loss_g_sum = 0.0;
    double pseudo_conf_sum = 0.0;
    int pseudo_conf_over_half = 0;
    int pseudo_rows = 0;
  };

  double current_lr() const {
    double lr = cfg_.lr * plateau_factor_;
    if (warmup_steps_ > 0 && global_step_ < warmup_steps_) {
      lr *= static_cast<double>(global_step_ + 1) /
            static_cast<double>(warmup_steps_);
    }
    return lr;
  }

  void step_params(tk::Tape& tape, tk::ParamBinding& binding,
                   tk::AdamOptimizer& optimizer, tk::ParamStore& params) {
    const bool is_g = &optimizer == &g_opt_;
    optimizer.config().lr =
        current_lr() * (is_g ? cfg_.instructor_lr_scale : 1.0);
    for (const auto& [name, var] : binding.bound()) {
      optimizer.step(name, params.at(name), tape.grad(var));
    }
  }

  tk::Var per_element_loss(tk::Var preds, const tk::Tensor& targets) {
    switch (cfg_.loss) {
      case LossKind::kMse: return op::mse_elems(preds, targets);
      case LossKind::kMae: return op::mae_elems(preds, targets);
      case LossKind::kBce: return op::bce_with_logits(preds, targets);
    }
    return op::mse_elems(preds, targets);
  }

  StepResult train_step(int epoch, int step, const Plan& plan) {
    if (opts_.mode == TrainMode::kPiModel) return pi_step(epoch, step, plan);

    const bool forward_pseudo =
        !plan.pseudo.empty() && opts_.mode != TrainMode::kSupervised;
    const int nl = static_cast<int>(plan.labeled.size());
    const int np = forward_pseudo ? static_cast<int>(plan.pseudo.size()) : 0;
    // The optimizer mean is over the scheduled batch size, so a zero-weight
    // pseudo block and no pseudo block produce identical updates.
    const int divisor =
        static_cast<int>(plan.labeled.size() + plan.pseudo.size());
    const int T = f_.config().n_tasks;
    const int B = nl + np;

    // Labeled graphs first: their tensor rows (and dropout mask positions)
    // stay put whether or not pseudo rows ride along.
    std::vector<const chem::MolGraph*> graphs;
    graphs.reserve(B);
    for (int id : plan.labeled) graphs.push_back(&task_.train->samples[id].graph);
    if (forward_pseudo)
      for (int id : plan.pseudo) graphs.push_back(pseudo_[id].graph);

    tk::Tensor targets({static_cast<std::size_t>(B), static_cast<std::size_t>(T)});
    tk::Tensor mask({static_cast<std::size_t>(B), static_cast<std::size_t>(T)});
    tk::Tensor inv_counts({static_cast<std::size_t>(B)});
    for (int r = 0; r < B; ++r) {
      const bool is_lab = r < nl;
      const std::vector<double>& tg =
          is_lab ? labeled_norm_[plan.labeled[r]]
                 : pseudo_[plan.pseudo[r - nl]].targets;
      const std::vector<std::uint8_t>& mk =
          is_lab ? task_.train->samples[plan.labeled[r]].mask
                 : pseudo_[plan.pseudo[r - nl]].mask;
      int cnt = 0;
      for (int t = 0; t < T; ++t) {
        targets.at(r, t) = tg[t];
        mask.at(r, t) = mk[t] ? 1.0 : 0.0;
        cnt += mk[t] ? 1 : 0;
      }
      inv_counts[r] = cnt > 0 ? 1.0 / cnt : 0.0;
    }

    GraphBatch batch = GraphBatch::build(graphs);
    tk::Tape tape;
    tk::ParamBinding f_binding(tape, f_.params());
    StochasticCtx ctx;
    ctx.train = true;
    ctx.rng = &rng_;
    ctx.epoch = static_cast<std::uint64_t>(epoch);
    ctx.step = static_cast<std::uint64_t>(step);
    models::TargetForward fwd = f_.forward(tape, f_binding, batch, ctx);

    tk::Var elems = per_element_loss(fwd.predictions, targets);
    tk::Var row_loss =
        op::mul_const(op::sum_axis(op::mul_const(elems, mask), 1), inv_counts);

    StepResult result;
    std::vector<double> p_vals(B, 1.0);
    double loss_g_sum = 0.0;
    const bool need_conf = forward_pseudo || cfg_.lambda > 0.0 ||
                           (g_.has_value() && train_instructor_);
    if (need_conf && B > 0 && opts_.mode != TrainMode::kSupervised) {
      compute_confidences(tape, fwd, targets, tape.value(row_loss), nl, np,
                          plan, &p_vals, &loss_g_sum);
    }
    for (int r = nl; r < B; ++r) {
      pseudo_[plan.pseudo[r - nl]].latest_confidence = p_vals[r];
      result.pseudo_conf_sum += p_vals[r];
      result.pseudo_conf_over_half += p_vals[r] > 0.5 ? 1 : 0;
    }
    result.pseudo_rows = np;

    // Eq. 2: labeled weight 1 (or 1 + lambda p), pseudo weight alpha(2p - 1);
    // p enters as a constant, so no gradient crosses between the models.
    tk::Tensor weights({static_cast<std::size_t>(B)});
    for (int r = 0; r < B; ++r) {
      if (r < nl) {
        weights[r] = cfg_.lambda > 0.0 ? 1.0 + cfg_.lambda * p_vals[r] : 1.0;
      } else {
        double w = 2.0 * p_vals[r] - 1.0;
        if (cfg_.floor_pseudo_weight_at_zero) w = std::max(0.0, w);
        weights[r] = cfg_.alpha * w;
      }
    }
    tk::Var loss_f = op::sum_all(op::mul_const(row_loss, weights));
    const double loss_f_sum = tape.value(loss_f).item();
    if (!std::isfinite(loss_f_sum) || !std::isfinite(loss_g_sum)) {
      raise(ErrorCode::kNonFiniteLoss, "epoch " + std::to_string(epoch) +
                                           " step " + std::to_string(step));
    }

    tk::Var step_loss = op::scale(loss_f, 1.0 / static_cast<double>(divisor));
    tape.backward(step_loss);
    step_params(tape, f_binding, f_opt_, f_.params());

    result.loss_f_sum = loss_f_sum;
    result.loss_g_sum = loss_g_sum;

    if (opts_.on_batch) {
      BatchDetail d;
      d.epoch = epoch;
      d.step = step;
      d.n_labeled = nl;
      d.n_pseudo = np;
      const tk::Tensor& preds = tape.value(fwd.predictions);
      d.preds.assign(preds.data(), preds.data() + preds.size());
      d.targets.assign(targets.data(), targets.data() + targets.size());
      d.mask.resize(mask.size());
      for (std::size_t i = 0; i < mask.size(); ++i)
        d.mask[i] = mask[i] > 0.5 ? 1 : 0;
      d.confidence = p_vals;
      d.observed.assign(B, 0);
      for (int r = 0; r < nl; ++r) d.observed[r] = 1;
      d.alpha = cfg_.alpha;
      d.lambda = cfg_.lambda;
      d.loss = cfg_.loss;
      d.floor_pseudo_weight = cfg_.floor_pseudo_weight_at_zero;
      d.loss_f_sum = loss_f_sum;
      d.loss_g_sum = loss_g_sum;
      d.n_tasks = T;
      opts_.on_batch(d);
    }
    ++global_step_;
    return result;
  }

  void compute_confidences(tk::Tape& f_tape, const models::TargetForward& fwd,
                           const tk::Tensor& targets,
                           const tk::Tensor& row_loss_vals, int nl, int np,
                           const Plan& plan, std::vector<double>* p_vals,
                           double* loss_g_sum) {
    const int B = nl + np;
    switch (opts_.confidence.kind) {
      case ConfidencePolicy::Kind::kConstant:
        std::fill(p_vals->begin(), p_vals->end(), opts_.confidence.constant_value);
        break;
      case ConfidencePolicy::Kind::kStored:
        for (int r = 0; r < B; ++r) {
          (*p_vals)[r] =
              r < nl ? 1.0 : pseudo_[plan.pseudo[r - nl]].stored_confidence;
        }
        break;
      case ConfidencePolicy::Kind::kInstructor: {
        if (!g_.has_value()) {
          std::fill(p_vals->begin(), p_vals->end(), 0.5);
          return;
        }
        break;
      }
    }

    // Whatever provides p for Eq. 2, a real instructor still trains on Eq. 1
    // when present (a constant-p stub only overrides what f consumes).
    if (g_.has_value()) {
      tk::Tensor emb = f_tape.value(fwd.graph_embeddings);  // detached copy
      substitute_external(emb, nl, np, plan);
      tk::Tensor h_col({static_cast<std::size_t>(B), 1});
      for (int r = 0; r < B; ++r) h_col[r] = row_loss_vals[r];
      tk::Tensor inputs = models::instructor_inputs(emb, targets, h_col);
      tk::Tensor c({static_cast<std::size_t>(B), 1});
      for (int r = 0; r < nl; ++r) c[r] = 1.0;

      tk::Tape g_tape;
      tk::ParamBinding g_binding(g_tape, g_->params());
      models::InstructorForward gf = g_->forward(g_tape, g_binding, inputs);
      if (opts_.confidence.kind == ConfidencePolicy::Kind::kInstructor) {
        for (int r = 0; r < B; ++r)
          (*p_vals)[r] = g_tape.value(gf.confidence)[r];
      }
      tk::Var bce = op::bce_with_logits(gf.logit, c);
      tk::Var l_g = op::sum_all(bce);
      *loss_g_sum = g_tape.value(l_g).item();
      if (train_instructor_) {
        tk::Var g_step{nullptr, -1};
        if (cfg_.instructor_class_balance && nl > 0 && np > 0) {
          // Optimize a balanced objective so the confidence calibrates around
          // one half instead of the labeled prior.
          tk::Tensor w({static_cast<std::size_t>(B), 1});
          const double w_lab = static_cast<double>(np) / nl;
          double total = 0.0;
          for (int r = 0; r < B; ++r) {
            w[r] = r < nl ? w_lab : 1.0;
            total += w[r];
          }
          g_step = op::scale(op::sum_all(op::mul_const(bce, w)), 1.0 / total);
        } else {
          g_step = op::scale(l_g, 1.0 / static_cast<double>(B));
        }
        g_tape.backward(g_step);
        step_params(g_tape, g_binding, g_opt_, g_->params());
      }
    }
  }

  void substitute_external(tk::Tensor& emb, int nl, int np, const Plan& plan) {
    if (!opts_.external_embeddings) return;
    for (int r = 0; r < nl + np; ++r) {
      const std::string& smiles =
          r < nl ? task_.train->samples[plan.labeled[r]].smiles
                 : pseudo_[plan.pseudo[r - nl]].smiles;
      if (!opts_.external_embeddings->contains(smiles)) continue;
      const std::vector<double>& v = opts_.external_embeddings->lookup(smiles);
      for (std::size_t j = 0; j < emb.cols(); ++j) emb.at(r, j) = v[j];
    }
  }

  StepResult pi_step(int epoch, int step, const Plan& plan) {
    const int T = f_.config().n_tasks;
    const int nl = static_cast<int>(plan.labeled.size());
    const int np = static_cast<int>(plan.pseudo.size());
    const int divisor = nl + np;

    std::vector<const chem::MolGraph*> lab_graphs;
    for (int id : plan.labeled)
      lab_graphs.push_back(&task_.train->samples[id].graph);
    tk::Tensor targets({static_cast<std::size_t>(nl), static_cast<std::size_t>(T)});
    tk::Tensor mask({static_cast<std::size_t>(nl), static_cast<std::size_t>(T)});
    tk::Tensor inv_counts({static_cast<std::size_t>(nl)});
    for (int r = 0; r < nl; ++r) {
      const auto& sample = task_.train->samples[plan.labeled[r]];
      int cnt = 0;
      for (int t = 0; t < T; ++t) {
        targets.at(r, t) = labeled_norm_[plan.labeled[r]][t];
        mask.at(r, t) = sample.mask[t] ? 1.0 : 0.0;
        cnt += sample.mask[t] ? 1 : 0;
      }
      inv_counts[r] = cnt > 0 ? 1.0 / cnt : 0.0;
    }

    tk::Tape tape;
    tk::ParamBinding f_binding(tape, f_.params());
    StochasticCtx ctx;
    ctx.train = true;
    ctx.rng = &rng_;
    ctx.epoch = static_cast<std::uint64_t>(epoch);
    ctx.step = static_cast<std::uint64_t>(step);
    GraphBatch lab_batch = GraphBatch::build(lab_graphs);
    models::TargetForward lab_fwd = f_.forward(tape, f_binding, lab_batch, ctx);
    tk::Var elems = per_element_loss(lab_fwd.predictions, targets);
    tk::Var row_loss =
        op::mul_const(op::sum_axis(op::mul_const(elems, mask), 1), inv_counts);
    tk::Var loss = op::sum_all(row_loss);

    double consistency_value = 0.0;
    if (np > 0) {
      std::vector<const chem::MolGraph*> unl_graphs;
      for (int id : plan.pseudo) unl_graphs.push_back(&task_.pool->graphs[id]);
      GraphBatch unl_batch = GraphBatch::build(unl_graphs);
      StochasticCtx ctx_a = ctx;
      ctx_a.label = "f/pi-a";
      StochasticCtx ctx_b = ctx;
      ctx_b.label = "f/pi-b";
      models::TargetForward fa = f_.forward(tape, f_binding, unl_batch, ctx_a);
      models::TargetForward fb = f_.forward(tape, f_binding, unl_batch, ctx_b);
      tk::Var cons =
          op::sum_all(op::mean_axis(op::square(op::sub(fa.predictions,
                                                       fb.predictions)),
                                    1));
      consistency_value = tape.value(cons).item();
      loss = op::add(loss, op::scale(cons, pi_ramp(epoch)));
    }

    const double loss_value = tape.value(loss).item();
    if (!std::isfinite(loss_value)) {
      raise(ErrorCode::kNonFiniteLoss, "epoch " + std::to_string(epoch) +
                                           " step " + std::to_string(step));
    }
    tk::Var step_loss = op::scale(loss, 1.0 / static_cast<double>(divisor));
    tape.backward(step_loss);
    step_params(tape, f_binding, f_opt_, f_.params());

    StepResult result;
    result.loss_f_sum = loss_value;
    result.loss_g_sum = consistency_value;  // consistency reported in this slot
    ++global_step_;
    return result;
  }

  double pi_ramp(int epoch) const {
    const double ramp_epochs =
        std::max(1.0, cfg_.pi_ramp_fraction * static_cast<double>(cfg_.epochs));
    const double t =
        std::min(1.0, static_cast<double>(epoch) / ramp_epochs);
    return cfg_.alpha * std::exp(-5.0 * (1.0 - t) * (1.0 - t));
  }

  // ---- artifacts -----------------------------------------------------------

  data::HybridDatabase build_final_hybrid() {
    std::vector<data::PseudoLabeledSample> rows;
    rows.reserve(pseudo_.size());
    rescore_confidences();
    for (const PseudoRow& r : pseudo_) {
      data::PseudoLabeledSample p;
      p.smiles = r.smiles;
      p.pseudo_labels = r.targets;
      p.confidence.assign(r.targets.size(), r.latest_confidence);
      p.assignment_epoch = r.assignment_epoch;
      p.source_model_id = f_.model_id();
      rows.push_back(std::move(p));
    }
    return data::build_hybrid(*task_.train, rows, norm_);
  }

  /// Final confidences: eval-mode rescore of every pseudo row with the final
  /// f and g (instructor policy); constant/stored policies keep their values.
  void rescore_confidences() {
    if (pseudo_.empty()) return;
    if (opts_.confidence.kind == ConfidencePolicy::Kind::kConstant) {
      for (PseudoRow& r : pseudo_)
        r.latest_confidence = opts_.confidence.constant_value;
      return;
    }
    if (opts_.confidence.kind == ConfidencePolicy::Kind::kStored) {
      for (PseudoRow& r : pseudo_) r.latest_confidence = r.stored_confidence;
      return;
    }
    if (!g_.has_value()) return;
    const int T = f_.config().n_tasks;
    std::vector<const chem::MolGraph*> graphs;
    for (const PseudoRow& r : pseudo_) graphs.push_back(r.graph);
    tk::Tensor preds, emb;
    forward_eval(f_, graphs, 256, &preds, &emb);
    const std::size_t n = pseudo_.size();
    tk::Tensor targets({n, static_cast<std::size_t>(T)});
    tk::Tensor h_col({n, 1});
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      int cnt = 0;
      for (int t = 0; t < T; ++t) {
        targets.at(i, t) = pseudo_[i].targets[t];
        if (pseudo_[i].mask[t]) {
          acc += loss_elem_scalar(preds.at(i, t), pseudo_[i].targets[t]);
          ++cnt;
        }
      }
      h_col[i] = cnt > 0 ? acc / cnt : 0.0;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!opts_.external_embeddings) break;
      if (!opts_.external_embeddings->contains(pseudo_[i].smiles)) continue;
      const auto& v = opts_.external_embeddings->lookup(pseudo_[i].smiles);
      for (std::size_t j = 0; j < emb.cols(); ++j) emb.at(i, j) = v[j];
    }
    tk::Tensor inputs = models::instructor_inputs(emb, targets, h_col);
    tk::Tape tape;
    models::InstructorForward gf = g_->forward(tape, inputs);
    for (std::size_t i = 0; i < n; ++i) {
      pseudo_[i].latest_confidence = tape.value(gf.confidence)[i];
    }
  }

  double loss_elem_scalar(double pred, double target) const {
    switch (cfg_.loss) {
      case LossKind::kMse: {
        const double d = pred - target;
        return d * d;
      }
      case LossKind::kMae: return std::fabs(pred - target);
      case LossKind::kBce:
        return std::max(pred, 0.0) - pred * target +
               std::log1p(std::exp(-std::fabs(pred)));
    }
    return 0.0;
  }

  TargetModel f_;
  std::optional<InstructorModel> g_;
  TrainTask task_;
  TrainConfig cfg_;
  RunOptions opts_;
  tk::SeededRng rng_;
  data::Normalizer norm_;
  std::vector<std::vector<double>> labeled_norm_;
  std::vector<PseudoRow> pseudo_;
  tk::AdamOptimizer f_opt_;
  tk::AdamOptimizer g_opt_;
  bool train_instructor_ = true;
  long global_step_ = 0;
  long warmup_steps_ = 0;
  double plateau_factor_ = 1.0;
};

RunArtifacts Trainer::run() {
  if (opts_.mode == TrainMode::kPiModel) {
    if (!task_.pool || task_.pool->empty()) {
      raise(ErrorCode::kDegeneratePool, "pi-model needs an unlabeled pool");
    }
    if (f_.config().dropout == 0.0) {
      warn("ZeroDropout: pi-model consistency term is identically zero");
    }
  }
  if (opts_.mode == TrainMode::kUps) {
    if (!task_.train->task.is_classification()) {
      raise(ErrorCode::kUnsupportedTask,
            "ups applies to classification tasks only");
    }
    if (!task_.pool || task_.pool->empty()) {
      raise(ErrorCode::kDegeneratePool, "ups needs an unlabeled pool");
    }
  }
  if ((opts_.mode == TrainMode::kInstructBio ||
       opts_.mode == TrainMode::kNaivePseudoLabel) &&
      (!task_.pool || task_.pool->empty()) && !cfg_.allow_empty_pool) {
    raise(ErrorCode::kDegeneratePool,
          "empty unlabeled pool; pass allow_empty_pool to degenerate to "
          "supervised training");
  }

  RunArtifacts art;
  art.normalizer = norm_;

  const bool lower_better = !task_.train->task.is_classification();

  // Warmup horizon from the first epoch's schedule shape.
  {
    const std::size_t steps0 = make_schedule(0).size();
    warmup_steps_ = static_cast<long>(
        std::llround(cfg_.warmup_ratio * static_cast<double>(steps0) *
                     static_cast<double>(std::max(1, cfg_.epochs))));
  }

  double best = lower_better ? 1e300 : -1e300;
  int since_improve = 0;
  int since_plateau = 0;
  std::map<std::string, tk::Tensor> best_params;

  auto snapshot_best = [&]() {
    best_params.clear();
    for (const auto& [name, tensor] : f_.params().entries())
      best_params.emplace(name, tensor);
  };

  // The incoming model (often a pretrained f0) seeds the best-checkpoint
  // tracking, so a rough first epoch can never lose it.
  if (cfg_.epochs > 0) {
    best = evaluate_model(f_, *task_.val, norm_).aggregate;
    art.best_epoch = -1;
    snapshot_best();
  }

  for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
    EpochReport report;
    report.epoch = epoch;

    if (refresh_each_k() && epoch % cfg_.k == 0) {
      refresh_pseudo_labels(epoch);
      report.pseudo_refreshed = true;
    }

    double conf_sum = 0.0;
    long conf_rows = 0, conf_over = 0;
    const std::vector<Plan> schedule = make_schedule(epoch);
    for (int step = 0; step < static_cast<int>(schedule.size()); ++step) {
      StepResult sr = train_step(epoch, step, schedule[step]);
      report.loss_f += sr.loss_f_sum;
      report.loss_g += sr.loss_g_sum;
      conf_sum += sr.pseudo_conf_sum;
      conf_rows += sr.pseudo_rows;
      conf_over += sr.pseudo_conf_over_half;
    }
    report.mean_pseudo_confidence =
        conf_rows > 0 ? conf_sum / static_cast<double>(conf_rows) : 0.0;
    report.frac_pseudo_confident =
        conf_rows > 0 ? static_cast<double>(conf_over) / conf_rows : 0.0;
    report.lr = current_lr();

    metrics::MetricReport val = evaluate_model(f_, *task_.val, norm_);
    report.val_metric = val.aggregate;
    art.epoch_log.push_back(report);
    art.stopped_epoch = epoch;

    const bool improved =
        lower_better ? val.aggregate < best : val.aggregate > best;
    if (improved) {
      best = val.aggregate;
      art.best_epoch = epoch;
      since_improve = 0;
      since_plateau = 0;
      snapshot_best();
    } else {
      ++since_improve;
      ++since_plateau;
      if (cfg_.plateau_lr_patience > 0 &&
          since_plateau >= cfg_.plateau_lr_patience) {
        plateau_factor_ *= cfg_.plateau_lr_factor;
        since_plateau = 0;
      }
      if (cfg_.early_stop_patience > 0 &&
          since_improve >= cfg_.early_stop_patience) {
        break;
      }
    }
  }

  art.best_val_metric = best;
  art.final_f = f_;
  art.best_f = f_;
  if (!best_params.empty()) {
    for (auto& [name, tensor] : art.best_f.params().entries()) {
      tensor = best_params.at(name);
    }
  }
  if (g_.has_value()) art.final_g = g_;
  if (has_pseudo_labels() && !pseudo_.empty()) {
    art.final_hybrid = build_final_hybrid();
  }
  if (task_.test && !task_.test->empty()) {
    art.test_report = evaluate_model(art.best_f, *task_.test, norm_);
  }
  return art;
}

}  // namespace

// ---- public API -------------------------------------------------------------

metrics::MetricReport evaluate_model(TargetModel& f, const data::Dataset& ds,
                                     const data::Normalizer& normalizer,
                                     int eval_batch) {
  if (ds.empty()) raise(ErrorCode::kEmptyDataset, "evaluate on empty dataset");
  tk::Tensor preds;
  const auto graphs = graph_ptrs(ds);
  forward_eval(f, graphs, eval_batch, &preds, nullptr);
  return report_from_preds(ds, preds, normalizer, false);
}

metrics::MetricReport evaluate_model_mae(TargetModel& f, const data::Dataset& ds,
                                         const data::Normalizer& normalizer,
                                         int eval_batch) {
  if (ds.empty()) raise(ErrorCode::kEmptyDataset, "evaluate on empty dataset");
  tk::Tensor preds;
  const auto graphs = graph_ptrs(ds);
  forward_eval(f, graphs, eval_batch, &preds, nullptr);
  return report_from_preds(ds, preds, normalizer, true);
}

RunArtifacts pretrain_target(TargetModel f, const data::Dataset& train,
                             const data::Dataset& val, const TrainConfig& cfg) {
  TrainConfig pre = cfg;
  pre.epochs = cfg.pretrain_f_epochs;
  TrainTask task;
  task.train = &train;
  task.val = &val;
  RunOptions opts;
  opts.mode = TrainMode::kSupervised;
  Trainer trainer(std::move(f), std::nullopt, task, pre, opts);
  return trainer.run();
}

std::vector<data::PseudoLabeledSample> assign_pseudo_labels(
    TargetModel& f, const data::UnlabeledPool& pool, data::TaskKind kind,
    int assignment_epoch) {
  std::vector<const chem::MolGraph*> graphs;
  graphs.reserve(pool.size());
  for (const auto& g : pool.graphs) graphs.push_back(&g);
  tk::Tensor preds;
  forward_eval(f, graphs, 256, &preds, nullptr);

  const int T = f.config().n_tasks;
  const bool classification = kind == data::TaskKind::kClassification;
  std::vector<data::PseudoLabeledSample> out(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    out[i].smiles = pool.smiles[i];
    out[i].pseudo_labels.resize(T);
    for (int t = 0; t < T; ++t) {
      const double v = preds.at(i, t);
      out[i].pseudo_labels[t] = classification ? sigmoid(v) : v;
    }
    out[i].confidence.assign(T, 0.5);
    out[i].assignment_epoch = assignment_epoch;
    out[i].source_model_id = f.model_id();
  }
  return out;
}

models::InstructorModel pretrain_instructor(
    InstructorModel g, TargetModel& f0, const data::Dataset& train,
    const data::Dataset& val, const std::vector<data::PseudoLabeledSample>& pseudo,
    const data::Normalizer& normalizer, const TrainConfig& cfg,
    const RunOptions& opts) {
  if (pseudo.empty() || train.empty()) {
    raise(ErrorCode::kDegenerateHybrid,
          "instructor pretraining needs both labeled and pseudo rows");
  }
  const int T = f0.config().n_tasks;
  const bool classification = train.task.is_classification();

  // f0 is frozen, so features are computed once: embedding, normalized label
  // vector and per-sample loss for every row.
  struct CachedRow {
    std::vector<double> input;
    double c = 0.0;
  };
  const auto H = static_cast<std::size_t>(f0.config().node_hidden);
  const std::size_t in_dim = H + static_cast<std::size_t>(T) + 1;

  auto make_rows = [&](const data::Dataset& ds, std::vector<CachedRow>& out) {
    tk::Tensor preds, emb;
    std::vector<const chem::MolGraph*> graphs = graph_ptrs(ds);
    forward_eval(f0, graphs, 256, &preds, &emb);
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
      CachedRow row;
      row.c = 1.0;
      row.input.resize(in_dim);
      for (std::size_t j = 0; j < H; ++j) row.input[j] = emb.at(i, j);
      double acc = 0.0;
      int cnt = 0;
      for (int t = 0; t < T; ++t) {
        const double y = classification
                             ? ds.samples[i].labels[t]
                             : normalizer.apply(ds.samples[i].labels[t], t);
        row.input[H + t] = ds.samples[i].mask[t] ? y : 0.0;
        if (ds.samples[i].mask[t]) {
          const double pred = preds.at(i, t);
          const double e =
              cfg.loss == LossKind::kMse
                  ? (pred - y) * (pred - y)
                  : (cfg.loss == LossKind::kMae
                         ? std::fabs(pred - y)
                         : std::max(pred, 0.0) - pred * y +
                               std::log1p(std::exp(-std::fabs(pred))));
          acc += e;
          ++cnt;
        }
      }
      row.input[in_dim - 1] = cnt > 0 ? acc / cnt : 0.0;
      out.push_back(std::move(row));
    }
  };

  std::vector<CachedRow> train_rows, val_rows;
  make_rows(train, train_rows);
  make_rows(val, val_rows);

  {
    // Pseudo rows: loss against their own pseudo-labels under frozen f0.
    data::UnlabeledPool pool;
    std::vector<chem::MolGraph> parsed;
    parsed.reserve(pseudo.size());
    for (const auto& p : pseudo) parsed.push_back(chem::parse_smiles(p.smiles));
    std::vector<const chem::MolGraph*> graphs;
    for (const auto& g : parsed) graphs.push_back(&g);
    tk::Tensor preds, emb;
    forward_eval(f0, graphs, 256, &preds, &emb);

    tk::SeededRng rng(cfg.seed);
    tk::RngStream holdout = rng.stream("g-pretrain/holdout");
    for (std::size_t i = 0; i < pseudo.size(); ++i) {
      CachedRow row;
      row.c = 0.0;
      row.input.resize(in_dim);
      for (std::size_t j = 0; j < H; ++j) row.input[j] = emb.at(i, j);
      double acc = 0.0;
      for (int t = 0; t < T; ++t) {
        const double y = pseudo[i].pseudo_labels[t];
        row.input[H + t] = y;
        const double pred = preds.at(i, t);
        acc += cfg.loss == LossKind::kMse
                   ? (pred - y) * (pred - y)
                   : (cfg.loss == LossKind::kMae
                          ? std::fabs(pred - y)
                          : std::max(pred, 0.0) - pred * y +
                                std::log1p(std::exp(-std::fabs(pred))));
      }
      row.input[in_dim - 1] = acc / std::max(1, T);
      // A tenth of the pseudo rows validate the instructor.
      if (holdout.next_double() < 0.1) {
        val_rows.push_back(std::move(row));
      } else {
        train_rows.push_back(std::move(row));
      }
    }
  }

  // Adam over cached features.
  tk::AdamConfig acfg;
  acfg.lr = cfg.lr * cfg.instructor_lr_scale;
  acfg.weight_decay = cfg.weight_decay;
  tk::AdamOptimizer optimizer(acfg);
  tk::SeededRng rng(cfg.seed);

  auto eval_bce = [&](InstructorModel& model) {
    if (val_rows.empty()) return 0.0;
    tk::Tensor inputs({val_rows.size(), in_dim});
    tk::Tensor c({val_rows.size(), 1});
    for (std::size_t i = 0; i < val_rows.size(); ++i) {
      std::copy(val_rows[i].input.begin(), val_rows[i].input.end(),
                inputs.data() + i * in_dim);
      c[i] = val_rows[i].c;
    }
    tk::Tape tape;
    models::InstructorForward gf = model.forward(tape, inputs);
    tk::Var l = op::mean_all(op::bce_with_logits(gf.logit, c));
    return tape.value(l).item();
  };

  double best = 1e300;
  int since_improve = 0;
  std::map<std::string, tk::Tensor> best_params;
  std::vector<int> order(train_rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

  // Class weights for balanced optimization (see instructor_class_balance).
  double n_lab = 0.0, n_pse = 0.0;
  for (const CachedRow& row : train_rows) (row.c > 0.5 ? n_lab : n_pse) += 1.0;
  const double w_lab =
      cfg.instructor_class_balance && n_lab > 0.0 ? n_pse / n_lab : 1.0;

  for (int epoch = 0; epoch < cfg.pretrain_g_epochs; ++epoch) {
    tk::RngStream shuffle_stream = rng.stream("g-pretrain/shuffle", epoch);
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[shuffle_stream.next_below(i)]);
    }
    for (std::size_t at = 0; at < order.size();
         at += static_cast<std::size_t>(cfg.batch)) {
      const std::size_t hi =
          std::min(order.size(), at + static_cast<std::size_t>(cfg.batch));
      const std::size_t B = hi - at;
      tk::Tensor inputs({B, in_dim});
      tk::Tensor c({B, 1});
      tk::Tensor w({B, 1});
      double total_w = 0.0;
      for (std::size_t i = 0; i < B; ++i) {
        const CachedRow& row = train_rows[order[at + i]];
        std::copy(row.input.begin(), row.input.end(), inputs.data() + i * in_dim);
        c[i] = row.c;
        w[i] = row.c > 0.5 ? w_lab : 1.0;
        total_w += w[i];
      }
      tk::Tape tape;
      tk::ParamBinding binding(tape, g.params());
      models::InstructorForward gf = g.forward(tape, binding, inputs);
      tk::Var l = op::scale(
          op::sum_all(op::mul_const(op::bce_with_logits(gf.logit, c), w)),
          1.0 / total_w);
      const double lv = tape.value(l).item();
      if (!std::isfinite(lv)) {
        raise(ErrorCode::kNonFiniteLoss,
              "instructor pretrain epoch " + std::to_string(epoch));
      }
      tape.backward(l);
      for (const auto& [name, var] : binding.bound()) {
        optimizer.step(name, g.params().at(name), tape.grad(var));
      }
    }
    const double val_bce = eval_bce(g);
    if (val_bce < best) {
      best = val_bce;
      since_improve = 0;
      best_params.clear();
      for (const auto& [name, tensor] : g.params().entries())
        best_params.emplace(name, tensor);
    } else if (cfg.early_stop_patience > 0 &&
               ++since_improve >= cfg.early_stop_patience) {
      break;
    }
  }
  if (!best_params.empty()) {
    for (auto& [name, tensor] : g.params().entries())
      tensor = best_params.at(name);
  }
  (void)opts;
  return g;
}

RunArtifacts run_training(TargetModel f, std::optional<InstructorModel> g,
                          const TrainTask& task, const TrainConfig& cfg,
                          const RunOptions& opts) {
  if (opts.mode == TrainMode::kFromHybrid) {
    if (!opts.hybrid) {
      raise(ErrorCode::kConfigError, "from-hybrid mode needs a hybrid database");
    }
    // Materialize the database into a labeled dataset plus stored-confidence
    // pseudo rows, then run the plain weighted loop over them.
    auto labeled = std::make_unique<data::Dataset>();
    labeled->task = opts.hybrid->task;
    std::vector<std::unique_ptr<chem::MolGraph>> graphs_keepalive;
    std::vector<PseudoRow> rows;
    for (const auto& r : opts.hybrid->rows) {
      if (r.observed) {
        data::LabeledSample s;
        s.smiles = r.smiles;
        s.labels = r.labels;
        s.mask = r.mask;
        s.graph = chem::parse_smiles(r.smiles);
        labeled->samples.push_back(std::move(s));
      }
    }
    if (labeled->empty()) {
      raise(ErrorCode::kEmptyDataset, "hybrid database has no labeled rows");
    }
    TrainTask inner = task;
    inner.train = labeled.get();
    RunOptions ropts = opts;
    ropts.confidence = opts.hybrid_confidence_weighting
                           ? ConfidencePolicy::stored()
                           : ConfidencePolicy::constant(1.0);
    Trainer trainer(std::move(f), std::nullopt, inner, cfg, ropts);
    // Pseudo rows in the training-space expected by the loop.
    const data::Normalizer& norm = trainer.normalizer();
    for (const auto& r : opts.hybrid->rows) {
      if (r.observed) continue;
      PseudoRow row;
      row.smiles = r.smiles;
      graphs_keepalive.push_back(
          std::make_unique<chem::MolGraph>(chem::parse_smiles(r.smiles)));
      row.graph = graphs_keepalive.back().get();
      row.targets.resize(r.labels.size());
      for (std::size_t t = 0; t < r.labels.size(); ++t) {
        row.targets[t] = labeled->task.is_classification()
                             ? r.labels[t]
                             : norm.apply(r.labels[t], static_cast<int>(t));
      }
      row.mask = r.mask;
      row.stored_confidence =
          r.confidence.empty() ? 1.0 : r.confidence.front();
      row.assignment_epoch = r.assignment_epoch;
      rows.push_back(std::move(row));
    }
    trainer.set_pseudo_rows(std::move(rows));
    return trainer.run();
  }

  // Pretraining stages for the instructor-guided loop.
  TargetModel f_run = std::move(f);
  if ((opts.mode == TrainMode::kInstructBio ||
       opts.mode == TrainMode::kNaivePseudoLabel ||
       opts.mode == TrainMode::kUps) &&
      opts.run_pretrain_f && cfg.pretrain_f_epochs > 0) {
    RunArtifacts pre = pretrain_target(std::move(f_run), *task.train, *task.val, cfg);
    f_run = std::move(pre.best_f);
  }

  if (opts.mode == TrainMode::kInstructBio && g.has_value() &&
      opts.run_pretrain_g && cfg.pretrain_g_epochs > 0) {
    if (!task.pool || task.pool->empty()) {
      if (!cfg.allow_empty_pool) {
        raise(ErrorCode::kDegenerateHybrid,
              "instructor pretraining needs pseudo rows (empty pool)");
      }
    } else {
      const data::Normalizer norm = data::Normalizer::fit(*task.train);
      std::vector<data::PseudoLabeledSample> pseudo =
          assign_pseudo_labels(f_run, *task.pool, task.train->task.kind, 0);
      g = pretrain_instructor(std::move(*g), f_run, *task.train, *task.val,
                              pseudo, norm, cfg, opts);
    }
  }

  Trainer trainer(std::move(f_run), std::move(g), task, cfg, opts);
  return trainer.run();
}

RunArtifacts run_instructbio(TargetModel f, InstructorModel g,
                             const TrainTask& task, const TrainConfig& cfg,
                             RunOptions opts) {
  opts.mode = TrainMode::kInstructBio;
  return run_training(std::move(f), std::move(g), task, cfg, opts);
}

RunArtifacts run_baseline_naive_pl(TargetModel f, const TrainTask& task,
                                   const TrainConfig& cfg, RunOptions opts) {
  opts.mode = TrainMode::kNaivePseudoLabel;
  opts.confidence = ConfidencePolicy::constant(1.0);
  return run_training(std::move(f), std::nullopt, task, cfg, opts);
}

RunArtifacts run_baseline_pi_model(TargetModel f, const TrainTask& task,
                                   const TrainConfig& cfg, RunOptions opts) {
  opts.mode = TrainMode::kPiModel;
  return run_training(std::move(f), std::nullopt, task, cfg, opts);
}

RunArtifacts run_baseline_ups(TargetModel f, const TrainTask& task,
                              const TrainConfig& cfg, double gamma1,
                              double gamma2, RunOptions opts) {
  opts.mode = TrainMode::kUps;
  opts.confidence = ConfidencePolicy::constant(1.0);
  TrainConfig ucfg = cfg;
  ucfg.ups_gamma1 = gamma1;
  ucfg.ups_gamma2 = gamma2;
  return run_training(std::move(f), std::nullopt, task, ucfg, opts);
}

}  // namespace ibio::train
