// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "ibio/data/dataset.hpp"

namespace ibio::data {

/// Per-task affine label normalizer, fitted on training labels only.
/// apply(x) = (x - mean) / std with population std; classification tasks use
/// the identity transform.
class Normalizer {
 public:
  Normalizer() = default;

  static Normalizer identity(int n_tasks);

  /// Fits per-task mean/std over unmasked train labels. Throws
  /// DegenerateLabels when a task has zero spread (or fewer than 2 values).
  static Normalizer fit(const Dataset& train);

  double apply(double value, int task) const;
  double invert(double value, int task) const;

  std::vector<double> apply_row(const std::vector<double>& values) const;
  std::vector<double> invert_row(const std::vector<double>& values) const;

  int n_tasks() const { return static_cast<int>(mean_.size()); }
  const std::vector<double>& means() const { return mean_; }
  const std::vector<double>& stds() const { return std_; }

  /// Rebuild from stored constants (checkpoint headers).
  static Normalizer from_moments(std::vector<double> means,
                                 std::vector<double> stds);

 private:
  std::vector<double> mean_;
  std::vector<double> std_;
};

}  // namespace ibio::data
