// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "ibio/chem/mol_graph.hpp"
#include "ibio/tensor/rng.hpp"

namespace ibio::chem {

/// Renders a MolGraph back to SMILES. With a stream, the traversal start and
/// neighbor order are randomized, producing an alternative rendering of the
/// same molecule; without one the walk is deterministic. Stereochemistry is
/// never emitted.
std::string write_smiles(const MolGraph& graph, tk::RngStream* shuffle = nullptr);

}  // namespace ibio::chem
