// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include "ibio/models/embeddings.hpp"

#include <fstream>

#include <json.hpp>

#include "ibio/common/error.hpp"
#include "ibio/data/loaders.hpp"

namespace ibio::models {

EmbeddingTable EmbeddingTable::import_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::kIoError, "cannot open " + path);

  EmbeddingTable out;
  std::string line;
  int line_no = 0;
  bool jsonl = false;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first_content_line) {
      jsonl = line.front() == '{';
      first_content_line = false;
      // CSV may carry a header; skip a leading non-numeric row.
      if (!jsonl) {
        const auto fields = data::split_csv_line(line);
        if (fields.size() >= 2) {
          try {
            (void)std::stod(fields[1]);
          } catch (...) {
            continue;  // header row
          }
        }
      }
    }
    std::string smiles;
    std::vector<double> vec;
    if (jsonl) {
      try {
        nlohmann::json j = nlohmann::json::parse(line);
        smiles = j.at("smiles").get<std::string>();
        vec = j.at("embedding").get<std::vector<double>>();
      } catch (const nlohmann::json::exception& e) {
        raise(ErrorCode::kCorruptRow,
              "line " + std::to_string(line_no) + ": " + e.what());
      }
    } else {
      const auto fields = data::split_csv_line(line);
      if (fields.size() < 2) {
        raise(ErrorCode::kCorruptRow,
              "line " + std::to_string(line_no) + ": too few fields");
      }
      smiles = fields[0];
      for (std::size_t i = 1; i < fields.size(); ++i) {
        try {
          vec.push_back(std::stod(fields[i]));
        } catch (...) {
          raise(ErrorCode::kCorruptRow, "line " + std::to_string(line_no) +
                                            ": bad number '" + fields[i] + "'");
        }
      }
    }
    if (out.width_ == 0) {
      out.width_ = static_cast<int>(vec.size());
      if (out.width_ == 0) {
        raise(ErrorCode::kWidthMismatch,
              "line " + std::to_string(line_no) + ": empty embedding");
      }
    } else if (static_cast<int>(vec.size()) != out.width_) {
      raise(ErrorCode::kWidthMismatch,
            "line " + std::to_string(line_no) + ": width " +
                std::to_string(vec.size()) + " != " +
                std::to_string(out.width_));
    }
    if (!out.table_.emplace(smiles, std::move(vec)).second) {
      raise(ErrorCode::kDuplicateKey,
            "line " + std::to_string(line_no) + ": duplicate '" + smiles + "'");
    }
  }
  return out;
}

const std::vector<double>& EmbeddingTable::lookup(
    const std::string& smiles) const {
  auto it = table_.find(smiles);
  if (it == table_.end()) {
    raise(ErrorCode::kMissingEmbedding, "no embedding for '" + smiles + "'");
  }
  return it->second;
}

}  // namespace ibio::models
