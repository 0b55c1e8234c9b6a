// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

#include "ibio/data/dataset.hpp"

namespace ibio::train {

/// Per-sample task loss H_f: squared error or absolute error for regression,
/// cross-entropy for classification.
enum class LossKind { kMse, kMae, kBce };

LossKind loss_kind_from_string(const std::string& s);
std::string loss_kind_to_string(LossKind k);

/// Checks the regression/classification pairing rule.
void validate_loss_for_task(LossKind loss, data::TaskKind kind);

struct TrainConfig {
  int epochs = 100;
  int batch = 64;
  double lr = 1e-3;
  double warmup_ratio = 0.0;
  int k = 10;           // pseudo-label refresh period, epochs
  double alpha = 0.1;   // balance weight on the pseudo term
  double lambda = 0.0;  // labeled weight factor 1 + lambda * p; 0 disables
  int pretrain_f_epochs = 100;
  int pretrain_g_epochs = 50;
  int early_stop_patience = 5;   // epochs without val improvement; 0 = off
  int plateau_lr_patience = 10;  // epochs before halving the learning rate
  double plateau_lr_factor = 0.5;
  double weight_decay = 1e-16;
  std::uint64_t seed = 0;
  LossKind loss = LossKind::kMse;

  /// Keeps negative pseudo weights (p < 0.5) unless enabled; off by default.
  bool floor_pseudo_weight_at_zero = false;
  /// Class-balances the instructor's optimization step (labeled rows weighted
  /// up to parity with pseudo rows). The observability loss value itself is
  /// always reported as the plain unweighted sum. Without balancing, a heavily
  /// unbalanced hybrid drives every confidence toward the labeled prior and
  /// 2p - 1 pins near -1.
  bool instructor_class_balance = true;
  /// Instructor learning rate as a multiple of lr.
  double instructor_lr_scale = 1.0;
  /// Lets a pseudo-labelled mode run with an empty pool, degenerating to
  /// supervised training, instead of raising DegeneratePool.
  bool allow_empty_pool = false;

  // UPS thresholds.
  double ups_gamma1 = 0.9;
  double ups_gamma2 = 0.1;
  // Pi-model consistency ramp length as a fraction of total epochs.
  double pi_ramp_fraction = 0.3;

  void validate() const;
};

}  // namespace ibio::train
