// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "ibio/tensor/param_store.hpp"

namespace ibio::models {

/// Checkpoint container: magic + version, a JSON header (array names, shapes,
/// seed, build id, plus caller metadata), then the raw little-endian f64
/// payloads in header order. Round-trips are bit-exact.
struct Checkpoint {
  nlohmann::json header;
  std::map<std::string, tk::Tensor> arrays;
};

void save_checkpoint(const std::string& path, nlohmann::json metadata,
                     const std::map<std::string, tk::Tensor>& arrays);

/// Throws CorruptCheckpoint on bad magic/truncation and ShapeMismatch when
/// the header disagrees with the payload size.
Checkpoint load_checkpoint(const std::string& path);

/// Copies arrays with a given prefix ("f/", "g/") into a ParamStore, checking
/// that names and shapes match exactly.
void restore_params(const Checkpoint& ckpt, const std::string& prefix,
                    tk::ParamStore& params);

/// Collects a ParamStore's tensors under a prefix.
void collect_params(const tk::ParamStore& params, const std::string& prefix,
                    std::map<std::string, tk::Tensor>& out);

}  // namespace ibio::models
