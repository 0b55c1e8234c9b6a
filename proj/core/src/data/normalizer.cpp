// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include "ibio/data/normalizer.hpp"

#include <cmath>

#include "ibio/common/error.hpp"

namespace ibio::data {

Normalizer Normalizer::identity(int n_tasks) {
  Normalizer n;
  n.mean_.assign(n_tasks, 0.0);
  n.std_.assign(n_tasks, 1.0);
  return n;
}

Normalizer Normalizer::fit(const Dataset& train) {
  const int n_tasks = train.task.n_tasks;
  if (train.task.is_classification()) return identity(n_tasks);

  Normalizer out;
  out.mean_.assign(n_tasks, 0.0);
  out.std_.assign(n_tasks, 1.0);
  for (int t = 0; t < n_tasks; ++t) {
    double sum = 0.0;
    long count = 0;
    for (const LabeledSample& s : train.samples) {
      if (!s.mask[t]) continue;
      sum += s.labels[t];
      ++count;
    }
    if (count < 2) {
      raise(ErrorCode::kDegenerateLabels,
            "task " + std::to_string(t) + " has fewer than 2 labels");
    }
    const double mean = sum / static_cast<double>(count);
    double var = 0.0;
    for (const LabeledSample& s : train.samples) {
      if (!s.mask[t]) continue;
      var += (s.labels[t] - mean) * (s.labels[t] - mean);
    }
    var /= static_cast<double>(count);
    if (var <= 0.0) {
      raise(ErrorCode::kDegenerateLabels,
            "task " + std::to_string(t) + " labels are constant");
    }
    out.mean_[t] = mean;
    out.std_[t] = std::sqrt(var);
  }
  return out;
}

double Normalizer::apply(double value, int task) const {
  return (value - mean_[task]) / std_[task];
}

double Normalizer::invert(double value, int task) const {
  return value * std_[task] + mean_[task];
}

std::vector<double> Normalizer::apply_row(const std::vector<double>& values) const {
  std::vector<double> out(values.size());
  for (std::size_t t = 0; t < values.size(); ++t)
    out[t] = apply(values[t], static_cast<int>(t));
  return out;
}

std::vector<double> Normalizer::invert_row(const std::vector<double>& values) const {
  std::vector<double> out(values.size());
  for (std::size_t t = 0; t < values.size(); ++t)
    out[t] = invert(values[t], static_cast<int>(t));
  return out;
}

Normalizer Normalizer::from_moments(std::vector<double> means,
                                    std::vector<double> stds) {
  if (means.size() != stds.size()) {
    raise(ErrorCode::kShapeMismatch, "normalizer moments length mismatch");
  }
  Normalizer n;
  n.mean_ = std::move(means);
  n.std_ = std::move(stds);
  return n;
}

}  // namespace ibio::data
