// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ibio/chem/mol_graph.hpp"

namespace ibio::chem {

/// Marks in_ring for every atom lying on a cycle, via the fundamental cycles
/// of a spanning forest. Returns the cycle-basis size, which equals
/// bonds - atoms + components.
int perceive_rings(MolGraph& graph);

}  // namespace ibio::chem
