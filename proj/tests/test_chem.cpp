// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <set>

#include "ibio/chem/element.hpp"
#include "ibio/chem/featurize.hpp"
#include "ibio/chem/fingerprint.hpp"
#include "ibio/chem/rings.hpp"
#include "ibio/chem/scaffold.hpp"
#include "ibio/chem/smiles.hpp"
#include "ibio/chem/smiles_writer.hpp"
#include "ibio/common/error.hpp"
#include "ibio/data/synthetic.hpp"
#include "support/graph_oracles.hpp"

using namespace ibio;
using chem::MolGraph;
using chem::parse_smiles;

TEST_CASE("ethanol parses with standard valence hydrogens") {
  MolGraph g = parse_smiles("CCO");
  REQUIRE(g.atom_count() == 3);
  REQUIRE(g.bond_count() == 2);
  CHECK(g.atoms[0].element == "C");
  CHECK(g.atoms[1].element == "C");
  CHECK(g.atoms[2].element == "O");
  CHECK(g.atoms[0].explicit_h == 3);
  CHECK(g.atoms[1].explicit_h == 2);
  CHECK(g.atoms[2].explicit_h == 1);
  CHECK_FALSE(g.multi_fragment);
}

TEST_CASE("benzene is aromatic and in a ring") {
  MolGraph g = parse_smiles("c1ccccc1");
  REQUIRE(g.atom_count() == 6);
  REQUIRE(g.bond_count() == 6);
  for (const auto& a : g.atoms) {
    CHECK(a.aromatic);
    CHECK(a.in_ring);
    CHECK(a.explicit_h == 1);
  }
  for (const auto& b : g.bonds) CHECK(b.order == chem::BondOrder::kAromatic);
}

TEST_CASE("unpaired ring digit raises") {
  try {
    parse_smiles("C1CC");
    FAIL("expected UnpairedRingBond");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnpairedRingBond);
  }
}

TEST_CASE("branch errors are typed") {
  CHECK_THROWS_AS(parse_smiles("CC(C"), Error);
  try {
    parse_smiles("CC(C");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnclosedBranch);
  }
  try {
    parse_smiles("CC)C");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnclosedBranch);
  }
}

TEST_CASE("unknown element raises") {
  try {
    parse_smiles("C[Xx]C");
    FAIL("expected UnknownElement");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownElement);
  }
}

TEST_CASE("bracket atoms carry charge and explicit hydrogens") {
  MolGraph g = parse_smiles("[NH4+]");
  REQUIRE(g.atom_count() == 1);
  CHECK(g.atoms[0].element == "N");
  CHECK(g.atoms[0].explicit_h == 4);
  CHECK(g.atoms[0].formal_charge == 1);

  MolGraph o = parse_smiles("[O-]C");
  CHECK(o.atoms[0].formal_charge == -1);
  CHECK(o.atoms[0].explicit_h == 0);

  MolGraph fe = parse_smiles("[Fe+3]");
  CHECK(fe.atoms[0].formal_charge == 3);
}

TEST_CASE("stereo markers parse away with warnings") {
  chem::ParseOptions opts;
  std::vector<std::string> warnings;
  opts.warnings = &warnings;
  MolGraph g = parse_smiles("F/C=C\\F", opts);
  CHECK(g.atom_count() == 4);
  CHECK(warnings.size() >= 2);
  MolGraph chiral = parse_smiles("C[C@H](N)O", opts);
  CHECK(chiral.atom_count() == 4);
}

TEST_CASE("dots split fragments and set the flag") {
  MolGraph g = parse_smiles("[Na+].[Cl-]");
  CHECK(g.atom_count() == 2);
  CHECK(g.bond_count() == 0);
  CHECK(g.multi_fragment);
}

TEST_CASE("percent ring closures work") {
  MolGraph g = parse_smiles("C%12CCCCC%12");
  CHECK(g.atom_count() == 6);
  CHECK(g.bond_count() == 6);
}

TEST_CASE("conflicting ring-bond orders are rejected") {
  try {
    parse_smiles("C=1CCCCC-1");
    FAIL("expected UnpairedRingBond");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnpairedRingBond);
  }
}

TEST_CASE("valence violation warns by default and throws in strict mode") {
  chem::ParseOptions lax;
  std::vector<std::string> warnings;
  lax.warnings = &warnings;
  MolGraph g = parse_smiles("O(C)(C)(C)C", lax);  // 4-coordinate oxygen
  CHECK(g.atom_count() == 5);
  CHECK(!warnings.empty());

  chem::ParseOptions strict;
  strict.strict_valence = true;
  CHECK_THROWS_AS(parse_smiles("O(C)(C)(C)C", strict), Error);
}

TEST_CASE("aromatic atom outside a ring is malformed") {
  try {
    parse_smiles("cc");
    FAIL("expected MalformedSmiles");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMalformedSmiles);
  }
}

TEST_CASE("heteroaromatic hydrogens follow the lowest-valence rule") {
  MolGraph pyridine = parse_smiles("c1ccncc1");
  int n_h = -1;
  for (const auto& a : pyridine.atoms)
    if (a.element == "N") n_h = a.explicit_h;
  CHECK(n_h == 0);

  MolGraph thiophene = parse_smiles("c1ccsc1");
  for (const auto& a : thiophene.atoms)
    if (a.element == "S") CHECK(a.explicit_h == 0);

  MolGraph pyrrole = parse_smiles("c1cc[nH]c1");
  for (const auto& a : pyrrole.atoms)
    if (a.element == "N") CHECK(a.explicit_h == 1);
}

TEST_CASE("ring perception matches the cyclomatic count") {
  MolGraph cp = parse_smiles("C1CC1");
  MolGraph copy = cp;
  CHECK(chem::perceive_rings(copy) == 1);
  for (const auto& a : copy.atoms) CHECK(a.in_ring);

  MolGraph chain = parse_smiles("CCO");
  copy = chain;
  CHECK(chem::perceive_rings(copy) == 0);
  for (const auto& a : copy.atoms) CHECK_FALSE(a.in_ring);

  MolGraph two = parse_smiles("C1CC1C2CC2");
  copy = two;
  CHECK(chem::perceive_rings(copy) == 2);
  int ring_atoms = 0;
  for (const auto& a : copy.atoms) ring_atoms += a.in_ring ? 1 : 0;
  CHECK(ring_atoms == 6);
}

TEST_CASE("cycle count equals bonds - atoms + components on random molecules") {
  tk::SeededRng rng(404);
  tk::RngStream s = rng.stream("mols");
  data::MoleculeGenConfig cfg;
  cfg.min_atoms = 4;
  cfg.max_atoms = 18;
  for (int i = 0; i < 1000; ++i) {
    data::GeneratedMolecule m = data::random_molecule(cfg, s);
    MolGraph g = m.graph;
    const int cycles = chem::perceive_rings(g);
    const int expected = static_cast<int>(g.bond_count()) -
                         static_cast<int>(g.atom_count()) +
                         chem::component_count(g);
    CHECK(cycles == expected);
  }
}

TEST_CASE("parse determinism") {
  const std::string s = "CC(=O)Oc1ccccc1C(=O)O";
  MolGraph a = parse_smiles(s);
  MolGraph b = parse_smiles(s);
  REQUIRE(a.atom_count() == b.atom_count());
  for (std::size_t i = 0; i < a.atom_count(); ++i) {
    CHECK(a.atoms[i].element == b.atoms[i].element);
    CHECK(a.atoms[i].explicit_h == b.atoms[i].explicit_h);
    CHECK(a.atoms[i].in_ring == b.atoms[i].in_ring);
    CHECK(a.atoms[i].degree == b.atoms[i].degree);
  }
}

TEST_CASE("atom features layout and one-hot sums") {
  MolGraph g = parse_smiles("CCO");
  const auto f = chem::featurize_atom(g, 2);  // oxygen
  REQUIRE(static_cast<int>(f.size()) == chem::kAtomFeatureDim);
  CHECK(f[chem::element_one_hot_index("O")] == 1.0);
  CHECK(f[13 + 1] == 1.0);                                       // degree 1
  CHECK(f[19 + static_cast<int>(chem::Hybridization::kSp3)] == 1.0);
  CHECK(f[23] == 0.0);
  CHECK(f[24] == 0.0);
  CHECK(f[27] == 1.0);  // one hydrogen

  double el = 0, deg = 0, hyb = 0;
  for (int i = 0; i < 13; ++i) el += f[i];
  for (int i = 13; i < 19; ++i) deg += f[i];
  for (int i = 19; i < 23; ++i) hyb += f[i];
  CHECK(el == 1.0);
  CHECK(deg == 1.0);
  CHECK(hyb == 1.0);
}

TEST_CASE("aromatic carbon reads sp2 with ring and aromatic flags") {
  MolGraph g = parse_smiles("c1ccccc1");
  const auto f = chem::featurize_atom(g, 0);
  CHECK(f[19 + static_cast<int>(chem::Hybridization::kSp2)] == 1.0);
  CHECK(f[23] == 1.0);
  CHECK(f[24] == 1.0);
}

TEST_CASE("scaled atomic weight matches the documented constants") {
  // Independent recomputation from the organic-subset weights.
  const double weights[] = {10.811, 12.011, 14.007, 15.999, 30.974, 32.06,
                            18.998, 35.45,  79.904, 126.904, 28.085, 78.971};
  double mean = 0.0;
  for (double w : weights) mean += w;
  mean /= 12.0;
  double var = 0.0;
  for (double w : weights) var += (w - mean) * (w - mean);
  const double sd = std::sqrt(var / 12.0);

  const double expect_c = 1.0 / (1.0 + std::exp(-(12.011 - mean) / sd));
  MolGraph g = parse_smiles("C");
  const auto f = chem::featurize_atom(g, 0);
  CHECK(f[25] == doctest::Approx(expect_c).epsilon(1e-12));
  CHECK(f[25] > 0.0);
  CHECK(f[25] < 1.0);
  CHECK(chem::atomic_weight_mean() == doctest::Approx(mean).epsilon(1e-12));
  CHECK(chem::atomic_weight_std() == doctest::Approx(sd).epsilon(1e-12));

  // sp detection: triple bond and allene-style double pair.
  MolGraph yne = parse_smiles("C#C");
  CHECK(chem::approximate_hybridization(yne, 0) == chem::Hybridization::kSp);
  MolGraph allene = parse_smiles("C=C=C");
  CHECK(chem::approximate_hybridization(allene, 1) == chem::Hybridization::kSp);
  CHECK(chem::approximate_hybridization(allene, 0) == chem::Hybridization::kSp2);
}

TEST_CASE("featurize index bounds") {
  MolGraph g = parse_smiles("CC");
  CHECK_THROWS_AS(chem::featurize_atom(g, 5), Error);
}

TEST_CASE("fingerprints require a power-of-two width") {
  MolGraph g = parse_smiles("CCO");
  CHECK_THROWS_AS(chem::circular_fingerprint(g, 2, 1000), Error);
  CHECK_NOTHROW(chem::circular_fingerprint(g, 2, 1024));
}

TEST_CASE("fingerprints are rendering-invariant and molecule-sensitive") {
  MolGraph a = parse_smiles("OCC");
  MolGraph b = parse_smiles("CCO");
  CHECK(chem::circular_fingerprint(a, 2, 2048) ==
        chem::circular_fingerprint(b, 2, 2048));

  MolGraph c = parse_smiles("CCC");
  CHECK_FALSE(chem::circular_fingerprint(b, 2, 2048) ==
              chem::circular_fingerprint(c, 2, 2048));
}

TEST_CASE("radius zero fingerprints depend only on atom invariants") {
  // Same multiset of atom-level environments, different connectivity.
  MolGraph a = parse_smiles("CC(C)C");   // isobutane
  MolGraph b = parse_smiles("CCCC");     // butane
  auto fa0 = chem::circular_fingerprint(a, 0, 1024);
  auto fb0 = chem::circular_fingerprint(b, 0, 1024);
  // Degrees differ between the two, so even radius 0 separates them...
  CHECK_FALSE(fa0 == fb0);
  // ...but two renderings of one molecule agree at radius 0.
  CHECK(fa0 == chem::circular_fingerprint(parse_smiles("C(C)(C)C"), 0, 1024));
}

TEST_CASE("tanimoto identity and disjoint cases") {
  MolGraph a = parse_smiles("c1ccccc1O");
  auto fp = chem::circular_fingerprint(a, 2, 2048);
  CHECK(chem::tanimoto(fp, fp) == doctest::Approx(1.0));
}

TEST_CASE("scaffold keys: acyclic empty, side chains pruned, ring kind kept") {
  CHECK(chem::scaffold_key(parse_smiles("CCCC")).empty());
  const std::string bare = chem::scaffold_key(parse_smiles("c1ccccc1"));
  CHECK(chem::scaffold_key(parse_smiles("CCc1ccccc1")) == bare);
  CHECK(chem::scaffold_key(parse_smiles("Cc1ccccc1")) == bare);
  CHECK(bare != chem::scaffold_key(parse_smiles("C1CCCCC1")));
}

TEST_CASE("scaffold keys are invariant over renderings") {
  const char* pairs[][2] = {
      {"c1ccccc1CCN", "NCCc1ccccc1"},
      {"C1CC1CO", "OCC1CC1"},
      {"c1ccc2ccccc2c1", "c1ccc2c(c1)cccc2"},
      {"O=C(O)c1ccccc1", "c1ccccc1C(=O)O"},
      {"C1CCC(CC1)N2CCN(CC2)C", "CN1CCN(CC1)C1CCCCC1"},
  };
  for (auto& pair : pairs) {
    CHECK(chem::scaffold_key(parse_smiles(pair[0])) ==
          chem::scaffold_key(parse_smiles(pair[1])));
  }
}

TEST_CASE("writer round-trips random molecules isomorphically") {
  tk::SeededRng rng(2024);
  tk::RngStream gen = rng.stream("gen");
  tk::RngStream shuffle = rng.stream("shuffle");
  data::MoleculeGenConfig cfg;
  cfg.min_atoms = 4;
  cfg.max_atoms = 11;
  for (int i = 0; i < 300; ++i) {
    data::GeneratedMolecule m = data::random_molecule(cfg, gen);
    // Randomized re-rendering of the same molecule.
    const std::string alt = chem::write_smiles(m.graph, &shuffle);
    MolGraph g2 = parse_smiles(alt);
    CHECK(testsupport::brute_force_isomorphic(m.graph, g2));
  }
}

TEST_CASE("isomorphism invariance of scaffold keys and fingerprints") {
  tk::SeededRng rng(31337);
  tk::RngStream gen = rng.stream("gen");
  tk::RngStream shuffle = rng.stream("shuffle");
  data::MoleculeGenConfig cfg;
  cfg.min_atoms = 5;
  cfg.max_atoms = 12;
  int checked = 0;
  for (int i = 0; i < 250; ++i) {
    data::GeneratedMolecule m = data::random_molecule(cfg, gen);
    const std::string alt = chem::write_smiles(m.graph, &shuffle);
    MolGraph g2 = parse_smiles(alt);
    REQUIRE(testsupport::brute_force_isomorphic(m.graph, g2));
    CHECK(chem::scaffold_key(m.graph) == chem::scaffold_key(g2));
    CHECK(chem::circular_fingerprint(m.graph, 2, 2048) ==
          chem::circular_fingerprint(g2, 2, 2048));
    ++checked;
  }
  CHECK(checked == 250);
}

TEST_CASE("different molecules get different scaffold keys (usually)") {
  // Not a guarantee of the encoding, but these common scaffolds must differ.
  std::set<std::string> keys;
  for (const char* s : {"c1ccccc1", "C1CCCCC1", "c1ccncc1", "c1ccc2ccccc2c1",
                        "C1CCNCC1", "c1ccsc1", "C1CCOC1"}) {
    keys.insert(chem::scaffold_key(parse_smiles(s)));
  }
  CHECK(keys.size() == 7);
}

TEST_CASE("ring-closure fuzz: typed errors only, no crashes") {
  tk::SeededRng rng(555);
  tk::RngStream s = rng.stream("fuzz");
  const std::string alphabet = "CNOSPcnos123456()[]=#-+.%@/\\FIB rl";
  int parsed = 0, rejected = 0;
  for (int i = 0; i < 3000; ++i) {
    std::string text;
    const int len = 1 + static_cast<int>(s.next_below(18));
    for (int j = 0; j < len; ++j) {
      text += alphabet[s.next_below(alphabet.size())];
    }
    try {
      parse_smiles(text);
      ++parsed;
    } catch (const Error&) {
      ++rejected;
    }
  }
  CHECK(parsed + rejected == 3000);
  CHECK(rejected > 0);
}

TEST_CASE("mutated valid SMILES fuzz") {
  tk::SeededRng rng(556);
  tk::RngStream gen = rng.stream("gen");
  tk::RngStream mut = rng.stream("mut");
  data::MoleculeGenConfig cfg;
  for (int i = 0; i < 500; ++i) {
    data::GeneratedMolecule m = data::random_molecule(cfg, gen);
    std::string text = m.smiles;
    const std::size_t pos = mut.next_below(text.size());
    text[pos] = "CNO(1)=#["[mut.next_below(9)];
    try {
      (void)parse_smiles(text);
    } catch (const Error&) {
      // typed rejection is fine
    }
  }
}
