// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace ibio {

enum class ErrorCode {
  // SMILES parsing
  kUnclosedBranch,
  kUnpairedRingBond,
  kUnknownElement,
  kValenceViolation,
  kMalformedSmiles,
  // tensors / autodiff
  kShapeMismatch,
  kNonScalarLoss,
  kConfigError,
  // datasets
  kMissingColumn,
  kEmptyDataset,
  kSizeExceedsPool,
  kDegenerateLabels,
  kCorruptRow,
  // models / checkpoints
  kEmptyBatch,
  kCorruptCheckpoint,
  kWidthMismatch,
  kDuplicateKey,
  kMissingEmbedding,
  // training
  kNonFiniteLoss,
  kDegeneratePool,
  kDegenerateHybrid,
  kUnsupportedTask,
  kEmptyTrain,
  kZeroDropout,
  // metrics
  kSingleClass,
  kAllMasked,
  kNoValidTask,
  // generic
  kIoError,
};

const char* error_code_name(ErrorCode code);

/// Exception carrying a stable error code alongside the human-readable text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace ibio
