// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>

#include "ibio/data/dataset.hpp"
#include "ibio/tensor/rng.hpp"

namespace ibio::data {

/// Random valence-correct molecule generator. Construction tracks true atom
/// and bond counts, so generated strings double as parser oracles.
struct MoleculeGenConfig {
  int min_atoms = 5;
  int max_atoms = 12;
  double hetero_prob = 0.22;    // N/O/S instead of C
  double branch_prob = 0.3;     // attach to a random atom instead of the tip
  double double_bond_prob = 0.1;
  double ring_close_prob = 0.4;    // chance of one extra ring closure
  double aromatic_ring_prob = 0.35;  // chance of splicing in an aromatic ring
};

struct GeneratedMolecule {
  std::string smiles;
  int atom_count = 0;
  int bond_count = 0;
  chem::MolGraph graph;
};

GeneratedMolecule random_molecule(const MoleculeGenConfig& cfg,
                                  tk::RngStream& rng);

/// Noise-free regression target: a smooth function of whole-graph statistics
/// (size, rings, heteroatoms, aromatic fraction, mean degree).
double synthetic_target(const chem::MolGraph& graph);

/// Semi-supervised regression fixture with covariate shift: the labeled and
/// validation sets come from a small-molecule distribution, the unlabeled
/// pool and test set from a wider one.
struct SyntheticFixtureConfig {
  int n_labeled = 100;
  int n_val = 40;
  int n_test = 400;
  int n_unlabeled = 5000;
  double noise_std = 0.25;
  std::uint64_t seed = 1;
  MoleculeGenConfig narrow_gen{5, 12};
  MoleculeGenConfig wide_gen{5, 20};
  bool classification = false;  // threshold the target at its narrow median
};

struct SyntheticFixture {
  Dataset train;
  Dataset val;
  Dataset test;
  UnlabeledPool pool;
  /// Noise-free target for every molecule, keyed by SMILES.
  std::unordered_map<std::string, double> oracle;
  double noise_std = 0.0;
  double class_threshold = 0.0;
};

SyntheticFixture make_synthetic_fixture(const SyntheticFixtureConfig& cfg);

}  // namespace ibio::data
