// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ibio/data/normalizer.hpp"
#include "ibio/models/instructor_model.hpp"
#include "ibio/models/target_model.hpp"
#include "ibio/train/config.hpp"
#include "ibio/train/engine.hpp"

namespace ibio::cli {

// Exit codes are stable API.
constexpr int kExitOk = 0;
constexpr int kExitSelftestFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntimeAbort = 3;

/// Flat key = value config document; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::string& path);

struct ResolvedConfig {
  train::TrainConfig train;
  models::TargetModelConfig model;
  data::TaskSpec task;
  int instructor_hidden = 0;  // 0: follow node_hidden
  std::size_t pool_subsample = 0;  // 0: use the whole pool
  std::map<std::string, std::string> raw;  // resolved key/value view
};

/// Applies config-file keys then command-line overrides (key=value strings).
/// Unknown keys raise ConfigError.
ResolvedConfig resolve_config(const std::map<std::string, std::string>& file,
                              const std::vector<std::string>& overrides);

std::uint64_t fnv1a_file(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

nlohmann::json manifest_json(const std::string& command,
                             const std::string& config_path,
                             const ResolvedConfig& cfg,
                             const std::vector<std::string>& data_files,
                             std::uint64_t seed);

/// Model checkpoint with enough header metadata to evaluate it standalone:
/// target (and optional instructor) parameters, model config, task spec,
/// normalizer moments and the recorded validation metric.
void save_model_checkpoint(const std::string& path,
                           const models::TargetModel& f,
                           const models::InstructorModel* g,
                           const data::TaskSpec& task,
                           const data::Normalizer& normalizer,
                           double val_metric, std::uint64_t seed,
                           train::LossKind loss);

struct LoadedCheckpoint {
  models::TargetModel f;
  std::optional<models::InstructorModel> g;
  data::TaskSpec task;
  data::Normalizer normalizer;
  double val_metric = 0.0;
  train::LossKind loss = train::LossKind::kMse;
};

LoadedCheckpoint load_model_checkpoint(const std::string& path);

}  // namespace ibio::cli
