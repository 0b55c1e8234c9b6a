// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ibio/data/dataset.hpp"
#include "ibio/data/normalizer.hpp"

namespace ibio::data {

/// One pseudo-annotated molecule. Regression values are stored in normalized
/// label space (the space the target model predicts in); classification
/// values are probabilities.
struct PseudoLabeledSample {
  std::string smiles;
  std::vector<double> pseudo_labels;
  std::vector<double> confidence;  // per task, instructor's p replicated
  int assignment_epoch = 0;
  std::string source_model_id;
  chem::MolGraph graph;
};

/// One row of the hybrid database D': labels live in raw (de-normalized)
/// units for both provenances so exports are directly trainable.
struct HybridSample {
  std::string smiles;
  std::vector<double> labels;
  std::vector<std::uint8_t> mask;  // all-ones for pseudo rows
  bool observed = false;           // c: 1 = true label, 0 = pseudo
  std::vector<double> confidence;  // pseudo rows only
  int assignment_epoch = -1;       // pseudo rows only
  std::string source_model_id;     // pseudo rows only
};

struct HybridDatabase {
  TaskSpec task;
  std::vector<HybridSample> rows;
  int collision_count = 0;  // pseudo rows dropped because a labeled row won

  std::size_t size() const { return rows.size(); }
  std::size_t labeled_count() const {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.observed ? 1 : 0;
    return n;
  }
  std::size_t pseudo_count() const { return rows.size() - labeled_count(); }
};

/// D' = labeled rows (c=1) followed by pseudo rows (c=0). Duplicate SMILES
/// resolve labeled-wins and are counted. The normalizer maps the pseudo
/// samples' normalized values back to raw label units.
HybridDatabase build_hybrid(const Dataset& labeled,
                            const std::vector<PseudoLabeledSample>& pseudo,
                            const Normalizer& normalizer);

/// JSONL export, one object per row: {smiles, labels, is_pseudo, confidence,
/// assignment_epoch, source_model_id}. Round-trips bit-exactly.
void export_hybrid(const HybridDatabase& db, const std::string& path);

/// Import, optionally dropping pseudo rows below a confidence threshold (the
/// per-task minimum is compared). Malformed lines raise CorruptRow with the
/// 1-based line number.
HybridDatabase import_hybrid(const std::string& path,
                             std::optional<double> min_confidence = std::nullopt);

}  // namespace ibio::data
