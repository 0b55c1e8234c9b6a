// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "ibio/train/engine.hpp"

namespace ibio::verify {

/// O(n^2) pair-counting ROC-AUC: fraction of (positive, negative) pairs
/// ranked correctly, ties counted half. Independent of the rank-based path.
double pair_count_auc(const std::vector<double>& scores,
                      const std::vector<int>& labels);

struct OracleLosses {
  double loss_f = 0.0;
  double loss_g = 0.0;
};

/// Scalar-loop reimplementation of the two training losses from raw batch
/// ingredients: per-sample task losses are rebuilt element by element, then
/// the labeled sum (weight 1 or 1 + lambda p) and the alpha * (2p - 1) pseudo
/// sum are accumulated in plain doubles. Kept deliberately separate from the
/// tensor-op implementation it checks.
OracleLosses scalar_loop_losses(const train::BatchDetail& d);

struct CheckResult {
  std::string name;
  bool ok = false;
  double value = 0.0;      // measured error or statistic
  double threshold = 0.0;  // pass bound
  std::string detail;
};

struct SelftestOptions {
  /// Test hook: perturb one analytic gradient inside the named check so the
  /// failure path is exercised end to end.
  std::string corrupt_gradient_op;
};

/// The full verification battery: finite-difference gradient checks over the
/// model matrix, loss-formula oracle comparisons on random batches, and
/// metric oracles. Everything is seeded and deterministic.
std::vector<CheckResult> run_selftest(const SelftestOptions& opts = {});

}  // namespace ibio::verify
