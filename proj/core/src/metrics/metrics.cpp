// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include "ibio/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "ibio/common/error.hpp"

namespace ibio::metrics {

double roc_auc(const std::vector<double>& scores,
               const std::vector<int>& binary_labels) {
  if (scores.size() != binary_labels.size()) {
    raise(ErrorCode::kShapeMismatch, "roc_auc: scores vs labels length");
  }
  long n_pos = 0, n_neg = 0;
  for (int y : binary_labels) (y != 0 ? n_pos : n_neg) += 1;
  if (n_pos == 0 || n_neg == 0) {
    raise(ErrorCode::kSingleClass, "roc_auc needs both classes");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });

  // Average ranks within tie groups, then the Mann-Whitney U statistic.
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (binary_labels[order[k]] != 0) rank_sum_pos += avg_rank;
    }
    i = j + 1;
  }
  const double u = rank_sum_pos -
                   static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

namespace {

double masked_accumulate(const std::vector<double>& preds,
                         const std::vector<double>& targets,
                         const std::vector<std::uint8_t>& mask, bool squared) {
  if (preds.size() != targets.size() || preds.size() != mask.size()) {
    raise(ErrorCode::kShapeMismatch, "metric input lengths differ");
  }
  double acc = 0.0;
  long n = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (!mask[i]) continue;
    const double d = preds[i] - targets[i];
    acc += squared ? d * d : std::fabs(d);
    ++n;
  }
  if (n == 0) raise(ErrorCode::kAllMasked, "no unmasked entries");
  return acc / static_cast<double>(n);
}

}  // namespace

double rmse(const std::vector<double>& preds, const std::vector<double>& targets,
            const std::vector<std::uint8_t>& mask) {
  return std::sqrt(masked_accumulate(preds, targets, mask, true));
}

double mae(const std::vector<double>& preds, const std::vector<double>& targets,
           const std::vector<std::uint8_t>& mask) {
  return masked_accumulate(preds, targets, mask, false);
}

MetricReport aggregate_multitask(const std::string& metric,
                                 std::vector<TaskScore> per_task) {
  MetricReport report;
  report.metric = metric;
  double sum = 0.0;
  for (const TaskScore& t : per_task) {
    if (t.valid) {
      sum += t.value;
      ++report.valid_tasks;
    } else {
      report.excluded_tasks.push_back(t.task);
    }
  }
  if (report.valid_tasks == 0) {
    raise(ErrorCode::kNoValidTask, "no task produced a valid " + metric);
  }
  report.aggregate = sum / report.valid_tasks;
  report.per_task = std::move(per_task);
  return report;
}

std::string metric_report_to_json(const MetricReport& report) {
  nlohmann::json j;
  j["metric"] = report.metric;
  j["aggregate"] = report.aggregate;
  j["valid_tasks"] = report.valid_tasks;
  j["excluded_tasks"] = report.excluded_tasks;
  j["seed"] = report.seed;
  nlohmann::json tasks = nlohmann::json::array();
  for (const TaskScore& t : report.per_task) {
    tasks.push_back({{"task", t.task},
                     {"value", t.value},
                     {"valid", t.valid},
                     {"count", t.evaluated_count},
                     {"note", t.note}});
  }
  j["per_task"] = std::move(tasks);
  return j.dump(2);
}

}  // namespace ibio::metrics
