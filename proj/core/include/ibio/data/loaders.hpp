// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ibio/data/dataset.hpp"

namespace ibio::data {

/// Loads a labeled CSV (header row: a smiles column plus label columns).
/// Rows whose SMILES fail to parse are skipped and counted; empty label cells
/// are masked. label_columns empty means "every column except smiles".
Dataset load_labeled_csv(const std::string& path, const TaskSpec& task,
                         const std::string& smiles_column = "smiles",
                         std::vector<std::string> label_columns = {});

/// Writes a dataset back to CSV with the same schema (smiles + label columns).
void save_labeled_csv(const Dataset& dataset, const std::string& path);

/// Loads an unlabeled pool: one SMILES per line, or a CSV with a smiles
/// column when the first line looks like a header.
UnlabeledPool load_unlabeled_pool(const std::string& path);

/// Uniform subsample without replacement; deterministic in (pool, size, seed).
UnlabeledPool subsample_pool(const UnlabeledPool& pool, std::size_t size,
                             std::uint64_t seed);

/// Splits CSV text into fields, honoring double quotes.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace ibio::data
