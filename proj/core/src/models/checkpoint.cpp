// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include "ibio/models/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "ibio/common/error.hpp"
#include "ibio/common/version.hpp"

namespace ibio::models {

namespace {

constexpr char kMagic[8] = {'I', 'B', 'I', 'O', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

void save_checkpoint(const std::string& path, nlohmann::json metadata,
                     const std::map<std::string, tk::Tensor>& arrays) {
  nlohmann::json header = std::move(metadata);
  header["format_version"] = kVersion;
  header["build"] = std::string("instructbio ") + kVersionString;
  nlohmann::json names = nlohmann::json::array();
  nlohmann::json shapes = nlohmann::json::array();
  for (const auto& [name, tensor] : arrays) {
    names.push_back(name);
    shapes.push_back(tensor.shape());
  }
  header["names"] = std::move(names);
  header["shapes"] = std::move(shapes);

  const std::string header_str = header.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::kIoError, "cannot write " + path);
  out.write(kMagic, sizeof(kMagic));
  std::uint32_t version = kVersion;
  out.write(reinterpret_cast<const char*>(&version), sizeof(version));
  const std::uint64_t header_len = header_str.size();
  out.write(reinterpret_cast<const char*>(&header_len), sizeof(header_len));
  out.write(header_str.data(), static_cast<std::streamsize>(header_len));
  for (const auto& [name, tensor] : arrays) {
    out.write(reinterpret_cast<const char*>(tensor.data()),
              static_cast<std::streamsize>(tensor.size() * sizeof(double)));
  }
  if (!out) raise(ErrorCode::kIoError, "short write to " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::kCorruptCheckpoint, "cannot open " + path);

  char magic[8];
  std::uint32_t version = 0;
  std::uint64_t header_len = 0;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  in.read(reinterpret_cast<char*>(&header_len), sizeof(header_len));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    raise(ErrorCode::kCorruptCheckpoint, path + ": bad magic");
  }
  if (version != kVersion) {
    raise(ErrorCode::kCorruptCheckpoint,
          path + ": unsupported version " + std::to_string(version));
  }
  std::string header_str(header_len, '\0');
  in.read(header_str.data(), static_cast<std::streamsize>(header_len));
  if (!in) raise(ErrorCode::kCorruptCheckpoint, path + ": truncated header");

  Checkpoint ckpt;
  try {
    ckpt.header = nlohmann::json::parse(header_str);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::kCorruptCheckpoint, path + ": header: " + e.what());
  }
  if (!ckpt.header.contains("names") || !ckpt.header.contains("shapes")) {
    raise(ErrorCode::kCorruptCheckpoint, path + ": header missing arrays");
  }
  const auto& names = ckpt.header["names"];
  const auto& shapes = ckpt.header["shapes"];
  if (names.size() != shapes.size()) {
    raise(ErrorCode::kCorruptCheckpoint, path + ": names/shapes mismatch");
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    const std::string name = names[i].get<std::string>();
    std::vector<std::size_t> shape =
        shapes[i].get<std::vector<std::size_t>>();
    tk::Tensor tensor(std::move(shape));
    in.read(reinterpret_cast<char*>(tensor.data()),
            static_cast<std::streamsize>(tensor.size() * sizeof(double)));
    if (!in) {
      raise(ErrorCode::kCorruptCheckpoint,
            path + ": truncated payload for " + name);
    }
    ckpt.arrays.emplace(name, std::move(tensor));
  }
  // Trailing garbage also counts as corruption.
  char probe;
  in.read(&probe, 1);
  if (!in.eof()) {
    raise(ErrorCode::kCorruptCheckpoint, path + ": trailing bytes");
  }
  return ckpt;
}

void restore_params(const Checkpoint& ckpt, const std::string& prefix,
                    tk::ParamStore& params) {
  for (auto& [name, tensor] : params.entries()) {
    const std::string key = prefix + name;
    auto it = ckpt.arrays.find(key);
    if (it == ckpt.arrays.end()) {
      raise(ErrorCode::kShapeMismatch, "checkpoint lacks array " + key);
    }
    if (!(it->second.shape() == tensor.shape())) {
      raise(ErrorCode::kShapeMismatch,
            key + ": checkpoint " + it->second.shape_str() + " vs model " +
                tensor.shape_str());
    }
    tensor = it->second;
  }
}

void collect_params(const tk::ParamStore& params, const std::string& prefix,
                    std::map<std::string, tk::Tensor>& out) {
  for (const auto& [name, tensor] : params.entries()) {
    out.emplace(prefix + name, tensor);
  }
}

}  // namespace ibio::models
