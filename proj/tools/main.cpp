// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include "cli_common.hpp"
#include "commands.hpp"
#include "ibio/common/version.hpp"

int main(int argc, char** argv) {
  using namespace ibio::cli;

  CLI::App app{"instructor-guided semi-supervised training for molecular "
               "property prediction"};
  app.set_version_flag("--version", ibio::kVersionString);
  app.require_subcommand(1);

  SplitArgs split_args;
  CLI::App* split = app.add_subcommand("split", "split a labeled CSV");
  split->add_option("--input", split_args.input, "labeled CSV")->required();
  split->add_option("--method", split_args.method, "scaffold|random");
  split->add_option("--ratios", split_args.ratios, "train,val,test");
  split->add_option("--seed", split_args.seed, "split seed");
  split->add_option("--out", split_args.out_dir, "output directory")->required();
  split->add_option("--smiles-col", split_args.smiles_column, "SMILES column");

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "train a model");
  train->add_option("--mode", train_args.mode,
                    "supervised|instructbio|naive-pl|pi|ups");
  train->add_option("--config", train_args.config_path, "config file");
  train->add_option("--data", train_args.data_dir,
                    "directory with train/val[/test].csv");
  train->add_option("--unlabeled", train_args.unlabeled_path,
                    "unlabeled SMILES pool");
  train->add_option("--out", train_args.out_dir, "run directory");
  train->add_option("--from-hybrid", train_args.from_hybrid,
                    "train from an exported hybrid JSONL");
  train->add_option("--min-confidence", train_args.min_confidence,
                    "confidence filter for --from-hybrid");
  train->add_flag("--flat-hybrid-weights", train_args.flat_hybrid_weights,
                  "weight pseudo rows alpha instead of alpha*(2p-1)");
  train->add_option("--embeddings", train_args.embeddings_path,
                    "external embedding table (csv/jsonl)");
  train->add_option("--set", train_args.overrides,
                    "config override key=value (repeatable)");
  train->add_option("--seed", train_args.seed, "seed override");
  train->add_option("--seed-sweep", train_args.seed_sweep,
                    "run this many consecutive seeds");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint");
  eval->add_option("--checkpoint", eval_args.checkpoint)->required();
  eval->add_option("--data", eval_args.data_csv)->required();
  eval->add_option("--out", eval_args.out_json, "metrics JSON path");
  eval->add_option("--dump-preds", eval_args.dump_preds,
                   "per-molecule prediction CSV");
  eval->add_option("--smiles-col", eval_args.smiles_column);

  ExportArgs export_args;
  CLI::App* exp = app.add_subcommand("export-hybrid",
                                     "filter and export a run's hybrid db");
  exp->add_option("--run", export_args.run_dir)->required();
  exp->add_option("--min-confidence", export_args.min_confidence);
  exp->add_option("--out", export_args.out_path)->required();

  SelftestArgs selftest_args;
  CLI::App* selftest =
      app.add_subcommand("selftest", "gradient, loss and metric oracles");
  selftest->add_option("--inject-grad-fault", selftest_args.inject_grad_fault,
                       "test hook: corrupt one gradient check by name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (split->parsed()) return cmd_split(split_args);
  if (train->parsed()) return cmd_train(train_args);
  if (eval->parsed()) return cmd_eval(eval_args);
  if (exp->parsed()) return cmd_export_hybrid(export_args);
  if (selftest->parsed()) return cmd_selftest(selftest_args);
  return kExitUsage;
}
