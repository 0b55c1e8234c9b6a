// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ibio/data/hybrid.hpp"
#include "ibio/data/synthetic.hpp"
#include "ibio/metrics/metrics.hpp"
#include "ibio/models/embeddings.hpp"
#include "ibio/models/instructor_model.hpp"
#include "ibio/models/target_model.hpp"
#include "ibio/train/config.hpp"

namespace ibio::train {

enum class TrainMode {
  kSupervised,
  kInstructBio,
  kNaivePseudoLabel,
  kPiModel,
  kUps,
  kFromHybrid,
};

TrainMode mode_from_string(const std::string& s);
std::string mode_to_string(TrainMode m);

/// Where the per-sample confidences p come from during Eq. 2 reweighting.
struct ConfidencePolicy {
  enum class Kind { kInstructor, kConstant, kStored };
  Kind kind = Kind::kInstructor;
  double constant_value = 1.0;

  static ConfidencePolicy instructor() { return {Kind::kInstructor, 0.0}; }
  static ConfidencePolicy constant(double p) { return {Kind::kConstant, p}; }
  static ConfidencePolicy stored() { return {Kind::kStored, 0.0}; }
};

struct EpochReport {
  int epoch = 0;
  double loss_f = 0.0;  // Eq. 2 value summed over the epoch
  double loss_g = 0.0;  // Eq. 1 value summed over the epoch
  double val_metric = 0.0;
  double mean_pseudo_confidence = 0.0;
  double frac_pseudo_confident = 0.0;  // fraction of pseudo rows with p > 0.5
  bool pseudo_refreshed = false;
  double lr = 0.0;

  std::string to_json_line() const;
};

/// Everything the per-batch loss assembly saw; consumed by the independent
/// scalar-loop oracle and by tests.
struct BatchDetail {
  int epoch = 0;
  int step = 0;
  int n_labeled = 0;
  int n_pseudo = 0;
  std::vector<double> preds;    // row-major [n, tasks], normalized space
  std::vector<double> targets;  // same layout
  std::vector<std::uint8_t> mask;
  std::vector<double> confidence;  // per row; labeled rows included
  std::vector<int> observed;       // c per row
  double alpha = 0.0;
  double lambda = 0.0;
  LossKind loss = LossKind::kMse;
  bool floor_pseudo_weight = false;
  double loss_f_sum = 0.0;
  double loss_g_sum = 0.0;
  int n_tasks = 1;
};

struct TrainTask {
  const data::Dataset* train = nullptr;
  const data::Dataset* val = nullptr;
  const data::Dataset* test = nullptr;        // optional
  const data::UnlabeledPool* pool = nullptr;  // optional
};

struct RunOptions {
  TrainMode mode = TrainMode::kSupervised;
  ConfidencePolicy confidence = ConfidencePolicy::instructor();
  bool run_pretrain_f = true;
  bool run_pretrain_g = true;
  /// From-hybrid training: pseudo rows weighted alpha*(2p-1) when true,
  /// flat alpha when false.
  bool hybrid_confidence_weighting = true;
  const data::HybridDatabase* hybrid = nullptr;  // kFromHybrid input
  const models::EmbeddingTable* external_embeddings = nullptr;
  std::function<void(const BatchDetail&)> on_batch;  // test/oracle hook
  std::function<void(const std::string&)> on_warning;
};

struct RunArtifacts {
  models::TargetModel best_f;
  models::TargetModel final_f;
  std::optional<models::InstructorModel> final_g;
  double best_val_metric = 0.0;
  int best_epoch = -1;
  int stopped_epoch = -1;  // last epoch actually run
  std::vector<EpochReport> epoch_log;
  data::HybridDatabase final_hybrid;  // empty for modes without pseudo labels
  std::optional<metrics::MetricReport> test_report;  // with best_f
  data::Normalizer normalizer;
  int pool_skipped = 0;
};

/// Evaluation on a dataset: ROC-AUC for classification, RMSE for regression,
/// computed per task on de-normalized predictions and averaged over valid
/// tasks. extra_mae adds an "mae" report for regression.
metrics::MetricReport evaluate_model(models::TargetModel& f,
                                     const data::Dataset& ds,
                                     const data::Normalizer& normalizer,
                                     int eval_batch = 256);
metrics::MetricReport evaluate_model_mae(models::TargetModel& f,
                                         const data::Dataset& ds,
                                         const data::Normalizer& normalizer,
                                         int eval_batch = 256);

/// Supervised pretraining of the target model (best-val checkpoint wins).
RunArtifacts pretrain_target(models::TargetModel f, const data::Dataset& train,
                             const data::Dataset& val, const TrainConfig& cfg);

/// Pseudo-labels for every pool molecule from the current f (eval mode).
/// Regression values stay normalized; classification values are sigmoid
/// probabilities.
std::vector<data::PseudoLabeledSample> assign_pseudo_labels(
    models::TargetModel& f, const data::UnlabeledPool& pool,
    data::TaskKind kind, int assignment_epoch);

/// Instructor pretraining against a frozen f0 on a hybrid built from f0's own
/// pseudo-labels; minimizes the observability BCE, returns best-val-BCE g.
models::InstructorModel pretrain_instructor(
    models::InstructorModel g, models::TargetModel& f0,
    const data::Dataset& train, const data::Dataset& val,
    const std::vector<data::PseudoLabeledSample>& pseudo,
    const data::Normalizer& normalizer, const TrainConfig& cfg,
    const RunOptions& opts = {});

/// The full engine. Dispatches on opts.mode; see run_* wrappers below.
RunArtifacts run_training(models::TargetModel f,
                          std::optional<models::InstructorModel> g,
                          const TrainTask& task, const TrainConfig& cfg,
                          const RunOptions& opts);

RunArtifacts run_instructbio(models::TargetModel f, models::InstructorModel g,
                             const TrainTask& task, const TrainConfig& cfg,
                             RunOptions opts = {});
RunArtifacts run_baseline_naive_pl(models::TargetModel f, const TrainTask& task,
                                   const TrainConfig& cfg, RunOptions opts = {});
RunArtifacts run_baseline_pi_model(models::TargetModel f, const TrainTask& task,
                                   const TrainConfig& cfg, RunOptions opts = {});
RunArtifacts run_baseline_ups(models::TargetModel f, const TrainTask& task,
                              const TrainConfig& cfg, double gamma1,
                              double gamma2, RunOptions opts = {});

}  // namespace ibio::train
