// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ibio/chem/mol_graph.hpp"

namespace ibio::data {

enum class TaskKind { kClassification, kRegression };

struct TaskSpec {
  TaskKind kind = TaskKind::kRegression;
  int n_tasks = 1;

  bool is_classification() const { return kind == TaskKind::kClassification; }
};

/// One labeled molecule. Missing labels (empty CSV cells) are masked out.
struct LabeledSample {
  std::string smiles;
  std::vector<double> labels;      // length n_tasks; masked entries are 0
  std::vector<std::uint8_t> mask;  // 1 = label present
  chem::MolGraph graph;            // parsed once at load time

  bool has_any_label() const {
    for (auto m : mask)
      if (m) return true;
    return false;
  }
};

struct Dataset {
  TaskSpec task;
  std::vector<LabeledSample> samples;
  std::vector<std::string> label_columns;
  int skipped_rows = 0;  // SMILES that failed to parse

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
};

/// Unlabeled molecule pool: SMILES plus pre-parsed graphs.
struct UnlabeledPool {
  std::vector<std::string> smiles;
  std::vector<chem::MolGraph> graphs;
  int skipped_rows = 0;

  std::size_t size() const { return smiles.size(); }
  bool empty() const { return smiles.empty(); }
};

struct SplitResult {
  Dataset train;
  Dataset val;
  Dataset test;
};

}  // namespace ibio::data
