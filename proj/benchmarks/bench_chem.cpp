// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "ibio/chem/fingerprint.hpp"
#include "ibio/chem/scaffold.hpp"
#include "ibio/chem/smiles.hpp"
#include "ibio/data/synthetic.hpp"

using namespace ibio;

namespace {

std::vector<std::string> corpus(int n, int max_atoms) {
  data::MoleculeGenConfig cfg;
  cfg.min_atoms = 6;
  cfg.max_atoms = max_atoms;
  tk::SeededRng rng(17);
  tk::RngStream s = rng.stream("bench");
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(data::random_molecule(cfg, s).smiles);
  return out;
}

}  // namespace

static void BM_ParseSmiles(benchmark::State& state) {
  const auto smiles = corpus(256, static_cast<int>(state.range(0)));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(chem::parse_smiles(smiles[i++ % smiles.size()]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ParseSmiles)->Arg(12)->Arg(24)->Arg(48);

static void BM_CircularFingerprint(benchmark::State& state) {
  const auto smiles = corpus(128, 24);
  std::vector<chem::MolGraph> graphs;
  for (const auto& s : smiles) graphs.push_back(chem::parse_smiles(s));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        chem::circular_fingerprint(graphs[i++ % graphs.size()], 2, 2048));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CircularFingerprint);

static void BM_ScaffoldKey(benchmark::State& state) {
  const auto smiles = corpus(128, 20);
  std::vector<chem::MolGraph> graphs;
  for (const auto& s : smiles) graphs.push_back(chem::parse_smiles(s));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(chem::scaffold_key(graphs[i++ % graphs.size()]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ScaffoldKey);
