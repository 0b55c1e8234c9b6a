// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "ibio/data/synthetic.hpp"
#include "ibio/train/engine.hpp"

using namespace ibio;

static void BM_InstructBioEpoch(benchmark::State& state) {
  data::SyntheticFixtureConfig fcfg;
  fcfg.n_labeled = 64;
  fcfg.n_val = 16;
  fcfg.n_test = 0;
  fcfg.n_unlabeled = static_cast<int>(state.range(0));
  fcfg.seed = 2;
  data::SyntheticFixture fx = data::make_synthetic_fixture(fcfg);

  models::TargetModelConfig mc;
  mc.n_layers = 2;
  mc.node_hidden = 32;
  mc.edge_hidden = 16;
  mc.readout = models::Readout::kSum;
  models::InstructorConfig gc;
  gc.embedding_dim = 32;
  gc.hidden = 32;

  train::TrainConfig cfg;
  cfg.epochs = 1;
  cfg.batch = 32;
  cfg.k = 1;
  cfg.alpha = 0.2;
  cfg.pretrain_f_epochs = 0;
  cfg.pretrain_g_epochs = 0;
  cfg.early_stop_patience = 0;
  cfg.plateau_lr_patience = 0;

  train::TrainTask task;
  task.train = &fx.train;
  task.val = &fx.val;
  task.pool = &fx.pool;
  train::RunOptions opts;
  opts.mode = train::TrainMode::kInstructBio;
  opts.run_pretrain_f = false;
  opts.run_pretrain_g = false;

  for (auto _ : state) {
    auto art = train::run_training(models::TargetModel::init(mc, 1),
                                   models::InstructorModel::init(gc, 2), task,
                                   cfg, opts);
    benchmark::DoNotOptimize(art.epoch_log);
  }
  state.SetItemsProcessed(state.iterations() *
                          (fx.train.size() + fx.pool.size()));
}
BENCHMARK(BM_InstructBioEpoch)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
