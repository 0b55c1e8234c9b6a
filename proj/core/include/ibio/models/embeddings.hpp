// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace ibio::models {

/// Externally computed molecule embeddings keyed by SMILES, imported from CSV
/// (smiles,v0,...,vk) or JSONL ({"smiles":..., "embedding":[...]}). Used to
/// substitute a pretrained encoder's vectors for the target model's own graph
/// embedding as the instructor's input.
class EmbeddingTable {
 public:
  static EmbeddingTable import_file(const std::string& path);

  std::size_t size() const { return table_.size(); }
  int width() const { return width_; }

  /// Throws MissingEmbedding when the molecule is absent; callers fall back
  /// to the target model's own embedding.
  const std::vector<double>& lookup(const std::string& smiles) const;
  bool contains(const std::string& smiles) const {
    return table_.count(smiles) > 0;
  }

 private:
  std::unordered_map<std::string, std::vector<double>> table_;
  int width_ = 0;
};

}  // namespace ibio::models
