// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include "ibio/data/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "ibio/chem/rings.hpp"
#include "ibio/chem/smiles.hpp"
#include "ibio/chem/smiles_writer.hpp"
#include "ibio/common/error.hpp"

namespace ibio::data {

namespace {

using chem::Atom;
using chem::Bond;
using chem::BondOrder;
using chem::MolGraph;

int free_valence(const MolGraph& g, int idx) {
  int max_valence = 4;
  const std::string& e = g.atoms[idx].element;
  if (e == "N") max_valence = 3;
  if (e == "O") max_valence = 2;
  if (e == "S") max_valence = 2;
  double used = 0.0;
  for (const Bond& b : g.bonds) {
    if (b.a == idx || b.b == idx) used += chem::bond_order_value(b.order);
  }
  return max_valence - static_cast<int>(std::ceil(used));
}

std::string pick_element(const MoleculeGenConfig& cfg, tk::RngStream& rng) {
  if (rng.next_double() >= cfg.hetero_prob) return "C";
  const double u = rng.next_double();
  if (u < 0.45) return "N";
  if (u < 0.85) return "O";
  return "S";
}

// Splice a 6-membered aromatic ring (benzene or pyridine), attached by a
// single bond to `attach`, or standalone when attach < 0.
void add_aromatic_ring(MolGraph& g, int attach, tk::RngStream& rng) {
  const int base = static_cast<int>(g.atoms.size());
  const bool pyridine = rng.next_double() < 0.3;
  const int n_pos = pyridine ? static_cast<int>(rng.next_below(6)) : -1;
  for (int i = 0; i < 6; ++i) {
    Atom a;
    a.element = i == n_pos ? "N" : "C";
    a.aromatic = true;
    g.atoms.push_back(a);
  }
  for (int i = 0; i < 6; ++i) {
    g.bonds.push_back(Bond{base + i, base + (i + 1) % 6, BondOrder::kAromatic});
  }
  if (attach >= 0) {
    int anchor = base + static_cast<int>(rng.next_below(6));
    if (anchor == base + n_pos) anchor = base + (n_pos + 1) % 6;
    g.bonds.push_back(Bond{attach, anchor, BondOrder::kSingle});
  }
}

bool bonded(const MolGraph& g, int a, int b) {
  for (const Bond& bond : g.bonds) {
    if ((bond.a == a && bond.b == b) || (bond.a == b && bond.b == a))
      return true;
  }
  return false;
}

}  // namespace

GeneratedMolecule random_molecule(const MoleculeGenConfig& cfg,
                                  tk::RngStream& rng) {
  const int target =
      cfg.min_atoms +
      static_cast<int>(rng.next_below(cfg.max_atoms - cfg.min_atoms + 1));

  MolGraph g;
  const bool start_aromatic =
      target >= 8 && rng.next_double() < cfg.aromatic_ring_prob;
  if (start_aromatic) {
    add_aromatic_ring(g, -1, rng);
  } else {
    Atom first;
    first.element = pick_element(cfg, rng);
    g.atoms.push_back(first);
  }

  while (static_cast<int>(g.atoms.size()) < target) {
    // Attachment point: the tip for chains, any open atom for branches.
    std::vector<int> open;
    for (std::size_t i = 0; i < g.atoms.size(); ++i) {
      if (free_valence(g, static_cast<int>(i)) >= 1)
        open.push_back(static_cast<int>(i));
    }
    if (open.empty()) break;
    int attach = open.back();
    if (rng.next_double() < cfg.branch_prob) {
      attach = open[rng.next_below(open.size())];
    }

    Atom next;
    next.element = pick_element(cfg, rng);
    const int next_idx = static_cast<int>(g.atoms.size());
    g.atoms.push_back(next);

    BondOrder order = BondOrder::kSingle;
    if (rng.next_double() < cfg.double_bond_prob &&
        free_valence(g, attach) >= 2 && next.element != "O" &&
        next.element != "S") {
      order = BondOrder::kDouble;
    }
    g.bonds.push_back(Bond{attach, next_idx, order});
  }

  // Optional extra ring among non-aromatic atoms at distance >= 2.
  if (rng.next_double() < cfg.ring_close_prob) {
    std::vector<int> open;
    for (std::size_t i = 0; i < g.atoms.size(); ++i) {
      if (!g.atoms[i].aromatic && free_valence(g, static_cast<int>(i)) >= 1)
        open.push_back(static_cast<int>(i));
    }
    for (int attempt = 0; attempt < 8 && open.size() >= 2; ++attempt) {
      const int a = open[rng.next_below(open.size())];
      const int b = open[rng.next_below(open.size())];
      if (a == b || bonded(g, a, b)) continue;
      g.bonds.push_back(Bond{std::min(a, b), std::max(a, b), BondOrder::kSingle});
      break;
    }
  }

  GeneratedMolecule out;
  out.atom_count = static_cast<int>(g.atoms.size());
  out.bond_count = static_cast<int>(g.bonds.size());
  chem::perceive_rings(g);
  out.smiles = chem::write_smiles(g);
  // Parse the rendered string so hydrogen counts and flags come from the same
  // path every consumer uses.
  out.graph = chem::parse_smiles(out.smiles);
  return out;
}

double synthetic_target(const MolGraph& graph) {
  const double n_atoms = static_cast<double>(graph.atom_count());
  const double n_bonds = static_cast<double>(graph.bond_count());
  double hetero = 0.0, aromatic = 0.0, ring_atoms = 0.0, charge = 0.0;
  for (const Atom& a : graph.atoms) {
    if (a.element != "C") hetero += 1.0;
    if (a.aromatic) aromatic += 1.0;
    if (a.in_ring) ring_atoms += 1.0;
    charge += a.formal_charge;
  }
  MolGraph copy = graph;
  const double n_rings = static_cast<double>(chem::perceive_rings(copy));
  const double mean_degree = n_atoms > 0 ? 2.0 * n_bonds / n_atoms : 0.0;

  // Smooth, mostly additive in per-atom counts, with a mild curvature term
  // so a purely linear readout cannot be exact.
  return 0.35 * n_atoms - 0.8 * hetero + 0.5 * n_rings + 0.22 * aromatic +
         1.1 * mean_degree + 0.9 * std::sin(0.45 * n_atoms) -
         0.05 * ring_atoms + 0.3 * charge;
}

SyntheticFixture make_synthetic_fixture(const SyntheticFixtureConfig& cfg) {
  SyntheticFixture fx;
  fx.noise_std = cfg.noise_std;
  TaskSpec task;
  task.kind = cfg.classification ? TaskKind::kClassification
                                 : TaskKind::kRegression;
  task.n_tasks = 1;
  fx.train.task = fx.val.task = fx.test.task = task;
  fx.train.label_columns = fx.val.label_columns = fx.test.label_columns = {"y"};

  tk::SeededRng rng(cfg.seed);
  tk::RngStream gen_stream = rng.stream("fixture/gen");
  tk::RngStream noise_stream = rng.stream("fixture/noise");
  std::unordered_set<std::string> seen;

  auto generate = [&](const MoleculeGenConfig& gen) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      GeneratedMolecule m = random_molecule(gen, gen_stream);
      if (seen.insert(m.smiles).second) return m;
    }
    raise(ErrorCode::kConfigError, "molecule generator exhausted");
  };

  // Threshold for the classification variant: median target over a probe
  // sample of the narrow distribution.
  if (cfg.classification) {
    std::vector<double> probe;
    tk::RngStream probe_stream = rng.stream("fixture/probe");
    for (int i = 0; i < 200; ++i) {
      GeneratedMolecule m = random_molecule(cfg.narrow_gen, probe_stream);
      probe.push_back(synthetic_target(m.graph));
    }
    std::sort(probe.begin(), probe.end());
    fx.class_threshold = probe[probe.size() / 2];
  }

  auto label_of = [&](const chem::MolGraph& graph, bool noisy) {
    const double y = synthetic_target(graph);
    const double jitter =
        noisy ? cfg.noise_std * noise_stream.next_normal() : 0.0;
    if (cfg.classification) {
      return y + jitter > fx.class_threshold ? 1.0 : 0.0;
    }
    return y + jitter;
  };

  // Training labels carry the observation noise; the evaluation splits use
  // the noise-free generative values so measured errors are function errors.
  auto fill = [&](Dataset& ds, int n, const MoleculeGenConfig& gen, bool noisy) {
    for (int i = 0; i < n; ++i) {
      GeneratedMolecule m = generate(gen);
      LabeledSample s;
      s.smiles = m.smiles;
      s.graph = m.graph;
      s.labels = {label_of(m.graph, noisy)};
      s.mask = {1};
      fx.oracle[m.smiles] = synthetic_target(m.graph);
      ds.samples.push_back(std::move(s));
    }
  };

  // Train labels come from the narrow pool; validation and test mirror each
  // other on the wide distribution, the way scaffold-split evaluation pairs
  // val and test on equally unseen chemotypes.
  fill(fx.train, cfg.n_labeled, cfg.narrow_gen, true);
  fill(fx.val, cfg.n_val, cfg.wide_gen, false);
  fill(fx.test, cfg.n_test, cfg.wide_gen, false);

  for (int i = 0; i < cfg.n_unlabeled; ++i) {
    GeneratedMolecule m = generate(cfg.wide_gen);
    fx.oracle[m.smiles] = synthetic_target(m.graph);
    fx.pool.smiles.push_back(m.smiles);
    fx.pool.graphs.push_back(std::move(m.graph));
  }
  return fx;
}

}  // namespace ibio::data
