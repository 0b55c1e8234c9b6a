// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ibio::cli {

struct SplitArgs {
  std::string input;
  std::string method = "scaffold";
  std::string ratios = "0.8,0.1,0.1";
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string smiles_column = "smiles";
};
int cmd_split(const SplitArgs& args);

struct TrainArgs {
  std::string mode = "supervised";
  std::string config_path;
  std::string data_dir;
  std::string unlabeled_path;
  std::string out_dir;
  std::string from_hybrid;
  std::string embeddings_path;
  double min_confidence = -1.0;  // from-hybrid import filter; <0 disables
  bool flat_hybrid_weights = false;
  std::vector<std::string> overrides;
  std::int64_t seed = -1;  // -1: config value
  int seed_sweep = 0;
};
int cmd_train(const TrainArgs& args);

struct EvalArgs {
  std::string checkpoint;
  std::string data_csv;
  std::string out_json;
  std::string dump_preds;
  std::string smiles_column = "smiles";
};
int cmd_eval(const EvalArgs& args);

struct ExportArgs {
  std::string run_dir;
  double min_confidence = 0.0;
  std::string out_path;
};
int cmd_export_hybrid(const ExportArgs& args);

struct SelftestArgs {
  std::string inject_grad_fault;
};
int cmd_selftest(const SelftestArgs& args);

}  // namespace ibio::cli
