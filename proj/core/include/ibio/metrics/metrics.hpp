// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ibio::metrics {

/// ROC-AUC via the rank-based Mann-Whitney statistic with average ranks for
/// ties; equals P(score+ > score-) + P(tie)/2. Needs at least one positive
/// and one negative, else SingleClass.
double roc_auc(const std::vector<double>& scores,
               const std::vector<int>& binary_labels);

/// Root-mean-squared error over unmasked entries.
double rmse(const std::vector<double>& preds, const std::vector<double>& targets,
            const std::vector<std::uint8_t>& mask);

/// Mean absolute error over unmasked entries.
double mae(const std::vector<double>& preds, const std::vector<double>& targets,
           const std::vector<std::uint8_t>& mask);

struct TaskScore {
  int task = 0;
  double value = 0.0;
  bool valid = true;         // single-class tasks are excluded, not averaged
  long evaluated_count = 0;  // unmasked pairs
  std::string note;
};

struct MetricReport {
  std::string metric;  // "roc_auc" | "rmse" | "mae"
  std::vector<TaskScore> per_task;
  double aggregate = 0.0;  // mean over valid tasks
  int valid_tasks = 0;
  std::vector<int> excluded_tasks;
  std::uint64_t seed = 0;
};

/// Mean over valid tasks; invalid tasks are listed, not averaged. Throws
/// NoValidTask when nothing is scoreable.
MetricReport aggregate_multitask(const std::string& metric,
                                 std::vector<TaskScore> per_task);

std::string metric_report_to_json(const MetricReport& report);

}  // namespace ibio::metrics
