// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ibio/chem/mol_graph.hpp"

namespace ibio::chem {

struct ParseOptions {
  /// When false (default), valence violations downgrade to warnings so noisy
  /// corpora still load; when true they raise ValenceViolation.
  bool strict_valence = false;
  /// Optional sink for non-fatal notes (discarded stereo marks, valence
  /// fixes). Null means warnings are dropped.
  std::vector<std::string>* warnings = nullptr;
};

/// Parses the supported SMILES subset into a MolGraph: organic-subset atoms,
/// bracket atoms with charge and H-count, bonds - = # :, branches, ring
/// closures 1-9 and %nn, dot-separated fragments. Stereochemistry characters
/// are accepted and discarded with a warning. Ring perception and implicit
/// hydrogen assignment run before returning.
MolGraph parse_smiles(std::string_view text, const ParseOptions& opts = {});

}  // namespace ibio::chem
