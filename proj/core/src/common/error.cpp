// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include "ibio/common/error.hpp"

namespace ibio {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnclosedBranch: return "UnclosedBranch";
    case ErrorCode::kUnpairedRingBond: return "UnpairedRingBond";
    case ErrorCode::kUnknownElement: return "UnknownElement";
    case ErrorCode::kValenceViolation: return "ValenceViolation";
    case ErrorCode::kMalformedSmiles: return "MalformedSmiles";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kNonScalarLoss: return "NonScalarLoss";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kSizeExceedsPool: return "SizeExceedsPool";
    case ErrorCode::kDegenerateLabels: return "DegenerateLabels";
    case ErrorCode::kCorruptRow: return "CorruptRow";
    case ErrorCode::kEmptyBatch: return "EmptyBatch";
    case ErrorCode::kCorruptCheckpoint: return "CorruptCheckpoint";
    case ErrorCode::kWidthMismatch: return "WidthMismatch";
    case ErrorCode::kDuplicateKey: return "DuplicateKey";
    case ErrorCode::kMissingEmbedding: return "MissingEmbedding";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kDegeneratePool: return "DegeneratePool";
    case ErrorCode::kDegenerateHybrid: return "DegenerateHybrid";
    case ErrorCode::kUnsupportedTask: return "UnsupportedTask";
    case ErrorCode::kEmptyTrain: return "EmptyTrain";
    case ErrorCode::kZeroDropout: return "ZeroDropout";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kAllMasked: return "AllMasked";
    case ErrorCode::kNoValidTask: return "NoValidTask";
    case ErrorCode::kIoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace ibio
