// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include "ibio/train/config.hpp"

#include "ibio/common/error.hpp"

namespace ibio::train {

LossKind loss_kind_from_string(const std::string& s) {
  if (s == "mse") return LossKind::kMse;
  if (s == "mae") return LossKind::kMae;
  if (s == "bce") return LossKind::kBce;
  raise(ErrorCode::kConfigError, "unknown loss kind '" + s + "'");
}

std::string loss_kind_to_string(LossKind k) {
  switch (k) {
    case LossKind::kMse: return "mse";
    case LossKind::kMae: return "mae";
    case LossKind::kBce: return "bce";
  }
  return "mse";
}

void validate_loss_for_task(LossKind loss, data::TaskKind kind) {
  if (kind == data::TaskKind::kRegression && loss == LossKind::kBce) {
    raise(ErrorCode::kConfigError, "bce loss requires a classification task");
  }
  if (kind == data::TaskKind::kClassification && loss != LossKind::kBce) {
    raise(ErrorCode::kConfigError, "classification tasks use the bce loss");
  }
}

void TrainConfig::validate() const {
  if (epochs < 0) raise(ErrorCode::kConfigError, "epochs must be >= 0");
  if (batch < 2) raise(ErrorCode::kConfigError, "batch must be >= 2");
  if (lr <= 0.0) raise(ErrorCode::kConfigError, "lr must be positive");
  if (warmup_ratio < 0.0 || warmup_ratio > 0.5) {
    raise(ErrorCode::kConfigError, "warmup_ratio must be in [0,0.5]");
  }
  if (k < 1) raise(ErrorCode::kConfigError, "update frequency k must be >= 1");
  if (alpha < 0.0 || alpha > 1.0) {
    raise(ErrorCode::kConfigError, "alpha must be in [0,1]");
  }
  if (lambda < 0.0) raise(ErrorCode::kConfigError, "lambda must be >= 0");
  if (pretrain_f_epochs < 0 || pretrain_g_epochs < 0) {
    raise(ErrorCode::kConfigError, "pretrain epochs must be >= 0");
  }
  if (early_stop_patience < 0 || plateau_lr_patience < 0) {
    raise(ErrorCode::kConfigError, "patience values must be >= 0");
  }
  if (plateau_lr_factor <= 0.0 || plateau_lr_factor > 1.0) {
    raise(ErrorCode::kConfigError, "plateau_lr_factor must be in (0,1]");
  }
  if (ups_gamma2 > ups_gamma1) {
    raise(ErrorCode::kConfigError, "ups gamma2 must not exceed gamma1");
  }
}

}  // namespace ibio::train
