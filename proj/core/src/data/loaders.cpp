// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include "ibio/data/loaders.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ibio/chem/smiles.hpp"
#include "ibio/common/error.hpp"
#include "ibio/tensor/rng.hpp"

namespace ibio::data {

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::kIoError, "cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  std::size_t e = s.find_last_not_of(" \t");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

Dataset load_labeled_csv(const std::string& path, const TaskSpec& task,
                         const std::string& smiles_column,
                         std::vector<std::string> label_columns) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) raise(ErrorCode::kEmptyDataset, path + " is empty");

  const std::vector<std::string> header = split_csv_line(lines[0]);
  int smiles_idx = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (trim(header[i]) == smiles_column) smiles_idx = static_cast<int>(i);
  }
  if (smiles_idx < 0) {
    raise(ErrorCode::kMissingColumn,
          "no '" + smiles_column + "' column in " + path);
  }

  if (label_columns.empty()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (static_cast<int>(i) != smiles_idx)
        label_columns.push_back(trim(header[i]));
    }
  }
  std::vector<int> label_idx;
  for (const std::string& col : label_columns) {
    int found = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == col) found = static_cast<int>(i);
    }
    if (found < 0) {
      raise(ErrorCode::kMissingColumn, "no '" + col + "' column in " + path);
    }
    label_idx.push_back(found);
  }

  Dataset ds;
  ds.task = task;
  ds.task.n_tasks = static_cast<int>(label_idx.size());
  ds.label_columns = label_columns;

  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(lines[li]);
    if (static_cast<std::size_t>(smiles_idx) >= fields.size()) {
      ++ds.skipped_rows;
      continue;
    }
    LabeledSample sample;
    sample.smiles = trim(fields[smiles_idx]);
    try {
      sample.graph = chem::parse_smiles(sample.smiles);
    } catch (const Error&) {
      ++ds.skipped_rows;
      continue;
    }
    sample.labels.assign(label_idx.size(), 0.0);
    sample.mask.assign(label_idx.size(), 0);
    for (std::size_t t = 0; t < label_idx.size(); ++t) {
      const std::string cell =
          static_cast<std::size_t>(label_idx[t]) < fields.size()
              ? trim(fields[label_idx[t]])
              : "";
      if (cell.empty()) continue;
      try {
        sample.labels[t] = std::stod(cell);
        sample.mask[t] = 1;
      } catch (...) {
        // non-numeric cell treated as missing
      }
    }
    if (!sample.has_any_label()) {
      ++ds.skipped_rows;
      continue;
    }
    ds.samples.push_back(std::move(sample));
  }
  if (ds.samples.empty()) {
    raise(ErrorCode::kEmptyDataset, "no usable rows in " + path);
  }
  return ds;
}

void save_labeled_csv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::kIoError, "cannot write " + path);
  out << "smiles";
  for (const std::string& col : dataset.label_columns) out << "," << col;
  out << "\n";
  out.precision(17);
  for (const LabeledSample& s : dataset.samples) {
    out << s.smiles;
    for (std::size_t t = 0; t < s.labels.size(); ++t) {
      out << ",";
      if (s.mask[t]) out << s.labels[t];
    }
    out << "\n";
  }
}

UnlabeledPool load_unlabeled_pool(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  UnlabeledPool pool;
  if (lines.empty()) return pool;

  // CSV with a smiles column, or plain one-SMILES-per-line.
  int smiles_idx = -1;
  std::size_t start = 0;
  const std::vector<std::string> first = split_csv_line(lines[0]);
  for (std::size_t i = 0; i < first.size(); ++i) {
    std::string h = trim(first[i]);
    std::transform(h.begin(), h.end(), h.begin(), ::tolower);
    if (h == "smiles") smiles_idx = static_cast<int>(i);
  }
  if (smiles_idx >= 0) start = 1;

  for (std::size_t li = start; li < lines.size(); ++li) {
    std::string text = trim(lines[li]);
    if (text.empty()) continue;
    if (smiles_idx >= 0) {
      const std::vector<std::string> fields = split_csv_line(lines[li]);
      if (static_cast<std::size_t>(smiles_idx) >= fields.size()) {
        ++pool.skipped_rows;
        continue;
      }
      text = trim(fields[smiles_idx]);
    } else {
      // Plain list: first whitespace-separated token is the SMILES.
      const std::size_t ws = text.find_first_of(" \t");
      if (ws != std::string::npos) text = text.substr(0, ws);
    }
    try {
      chem::MolGraph g = chem::parse_smiles(text);
      pool.smiles.push_back(text);
      pool.graphs.push_back(std::move(g));
    } catch (const Error&) {
      ++pool.skipped_rows;
    }
  }
  return pool;
}

UnlabeledPool subsample_pool(const UnlabeledPool& pool, std::size_t size,
                             std::uint64_t seed) {
  if (size > pool.size()) {
    raise(ErrorCode::kSizeExceedsPool,
          std::to_string(size) + " > pool of " + std::to_string(pool.size()));
  }
  // Partial Fisher-Yates over an index vector.
  std::vector<std::size_t> idx(pool.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  tk::RngStream stream = tk::SeededRng(seed).stream("pool/subsample");
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t j = i + stream.next_below(idx.size() - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(size);
  std::sort(idx.begin(), idx.end());

  UnlabeledPool out;
  out.smiles.reserve(size);
  out.graphs.reserve(size);
  for (std::size_t i : idx) {
    out.smiles.push_back(pool.smiles[i]);
    out.graphs.push_back(pool.graphs[i]);
  }
  return out;
}

}  // namespace ibio::data
