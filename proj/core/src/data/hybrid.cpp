// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include "ibio/data/hybrid.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "ibio/common/error.hpp"

namespace ibio::data {

using nlohmann::json;

HybridDatabase build_hybrid(const Dataset& labeled,
                            const std::vector<PseudoLabeledSample>& pseudo,
                            const Normalizer& normalizer) {
  HybridDatabase db;
  db.task = labeled.task;

  std::unordered_set<std::string> labeled_smiles;
  for (const LabeledSample& s : labeled.samples) {
    HybridSample row;
    row.smiles = s.smiles;
    row.labels = s.labels;
    row.mask = s.mask;
    row.observed = true;
    db.rows.push_back(std::move(row));
    labeled_smiles.insert(s.smiles);
  }
  for (const PseudoLabeledSample& p : pseudo) {
    if (labeled_smiles.count(p.smiles)) {
      ++db.collision_count;
      continue;
    }
    HybridSample row;
    row.smiles = p.smiles;
    row.labels = labeled.task.is_classification()
                     ? p.pseudo_labels
                     : normalizer.invert_row(p.pseudo_labels);
    row.mask.assign(row.labels.size(), 1);
    row.observed = false;
    row.confidence = p.confidence;
    row.assignment_epoch = p.assignment_epoch;
    row.source_model_id = p.source_model_id;
    db.rows.push_back(std::move(row));
  }
  return db;
}

void export_hybrid(const HybridDatabase& db, const std::string& path) {
  if (db.rows.empty()) {
    raise(ErrorCode::kEmptyDataset, "refusing to export an empty hybrid db");
  }
  std::ofstream out(path);
  if (!out) raise(ErrorCode::kIoError, "cannot write " + path);
  for (const HybridSample& row : db.rows) {
    json j;
    j["smiles"] = row.smiles;
    json labels = json::array();
    for (std::size_t t = 0; t < row.labels.size(); ++t) {
      if (row.mask[t]) {
        labels.push_back(row.labels[t]);
      } else {
        labels.push_back(nullptr);
      }
    }
    j["labels"] = std::move(labels);
    j["is_pseudo"] = !row.observed;
    if (row.observed) {
      j["confidence"] = nullptr;
      j["assignment_epoch"] = nullptr;
      j["source_model_id"] = nullptr;
    } else {
      j["confidence"] = row.confidence;
      j["assignment_epoch"] = row.assignment_epoch;
      j["source_model_id"] = row.source_model_id;
    }
    out << j.dump() << "\n";
  }
}

HybridDatabase import_hybrid(const std::string& path,
                             std::optional<double> min_confidence) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::kIoError, "cannot open " + path);

  HybridDatabase db;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      raise(ErrorCode::kCorruptRow,
            "line " + std::to_string(line_no) + ": " + e.what());
    }
    HybridSample row;
    try {
      row.smiles = j.at("smiles").get<std::string>();
      const json& labels = j.at("labels");
      for (const json& v : labels) {
        if (v.is_null()) {
          row.labels.push_back(0.0);
          row.mask.push_back(0);
        } else {
          row.labels.push_back(v.get<double>());
          row.mask.push_back(1);
        }
      }
      row.observed = !j.at("is_pseudo").get<bool>();
      if (!row.observed) {
        row.confidence = j.at("confidence").get<std::vector<double>>();
        row.assignment_epoch = j.at("assignment_epoch").get<int>();
        row.source_model_id = j.at("source_model_id").get<std::string>();
      }
    } catch (const json::exception& e) {
      raise(ErrorCode::kCorruptRow,
            "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!row.observed && min_confidence.has_value()) {
      const double p = row.confidence.empty()
                           ? 0.0
                           : *std::min_element(row.confidence.begin(),
                                               row.confidence.end());
      if (p < *min_confidence) continue;
    }
    db.rows.push_back(std::move(row));
  }
  return db;
}

}  // namespace ibio::data
