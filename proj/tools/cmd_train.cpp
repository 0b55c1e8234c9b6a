// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "cli_common.hpp"
#include "commands.hpp"
#include "ibio/common/error.hpp"
#include "ibio/data/loaders.hpp"
#include "ibio/train/engine.hpp"

namespace ibio::cli {

namespace fs = std::filesystem;

namespace {

struct RunInputs {
  data::Dataset train;
  data::Dataset val;
  data::Dataset test;
  data::UnlabeledPool pool;
  data::HybridDatabase hybrid;
  std::optional<models::EmbeddingTable> embeddings;
  std::vector<std::string> files;  // for manifest hashing
};

/// One fully-specified run writing its artifacts into out_dir.
int run_single(const TrainArgs& args, const ResolvedConfig& rc,
               const RunInputs& inputs, std::uint64_t seed,
               const std::string& out_dir, double* test_metric_out) {
  train::TrainConfig cfg = rc.train;
  cfg.seed = seed;

  models::TargetModelConfig mc = rc.model;
  mc.n_tasks = inputs.train.task.n_tasks;
  mc.validate();

  fs::create_directories(out_dir);
  {
    nlohmann::json manifest = manifest_json("train --mode " + args.mode,
                                            args.config_path, rc, inputs.files,
                                            seed);
    manifest["mode"] = args.mode;
    manifest["out_dir"] = out_dir;
    write_text_file(out_dir + "/manifest.json", manifest.dump(2) + "\n");
    std::string resolved;
    for (const auto& [k, v] : rc.raw) resolved += k + " = " + v + "\n";
    resolved += "seed = " + std::to_string(seed) + "\n";
    write_text_file(out_dir + "/config.resolved.txt", resolved);
  }

  train::TrainTask task;
  task.train = &inputs.train;
  task.val = &inputs.val;
  if (!inputs.test.empty()) task.test = &inputs.test;
  if (!inputs.pool.empty()) task.pool = &inputs.pool;

  train::RunOptions opts;
  opts.mode = train::mode_from_string(args.mode);
  if (inputs.embeddings.has_value()) {
    opts.external_embeddings = &*inputs.embeddings;
  }
  opts.on_warning = [](const std::string& w) {
    std::cerr << "warning: " << w << "\n";
  };
  if (!args.from_hybrid.empty()) {
    opts.mode = train::TrainMode::kFromHybrid;
    opts.hybrid = &inputs.hybrid;
    opts.hybrid_confidence_weighting = !args.flat_hybrid_weights;
  }
  if (opts.mode == train::TrainMode::kNaivePseudoLabel) {
    opts.confidence = train::ConfidencePolicy::constant(1.0);
  }

  models::TargetModel f = models::TargetModel::init(mc, seed);
  std::optional<models::InstructorModel> g;
  if (opts.mode == train::TrainMode::kInstructBio) {
    models::InstructorConfig gc;
    gc.embedding_dim = mc.node_hidden;
    gc.n_tasks = mc.n_tasks;
    gc.hidden = rc.instructor_hidden > 0 ? rc.instructor_hidden : mc.node_hidden;
    g = models::InstructorModel::init(gc, seed + 0x9E37ULL);
  }

  train::RunArtifacts art =
      train::run_training(std::move(f), std::move(g), task, cfg, opts);

  // Artifacts: epoch log, best checkpoint, metrics, final hybrid.
  {
    std::ofstream log(out_dir + "/epochs.jsonl");
    for (const auto& r : art.epoch_log) log << r.to_json_line() << "\n";
  }
  save_model_checkpoint(out_dir + "/best.ckpt", art.best_f,
                        art.final_g ? &*art.final_g : nullptr,
                        inputs.train.task, art.normalizer, art.best_val_metric,
                        seed, cfg.loss);

  nlohmann::json metrics;
  metrics["mode"] = args.mode;
  metrics["seed"] = seed;
  metrics["best_epoch"] = art.best_epoch;
  metrics["stopped_epoch"] = art.stopped_epoch;
  metrics["best_val_metric"] = art.best_val_metric;
  if (art.test_report) {
    metrics["test"] = nlohmann::json::parse(
        metrics::metric_report_to_json(*art.test_report));
    if (test_metric_out) *test_metric_out = art.test_report->aggregate;
  }
  write_text_file(out_dir + "/metrics.json", metrics.dump(2) + "\n");

  {
    // Per-epoch metric series for plotting.
    std::ofstream csv(out_dir + "/epoch_metrics.csv");
    csv << "epoch,loss_f,loss_g,val_metric,lr\n";
    csv.precision(17);
    for (const auto& r : art.epoch_log) {
      csv << r.epoch << "," << r.loss_f << "," << r.loss_g << ","
          << r.val_metric << "," << r.lr << "\n";
    }
  }

  if (art.final_hybrid.size() > 0) {
    data::export_hybrid(art.final_hybrid, out_dir + "/hybrid.jsonl");
  }
  std::cout << "run " << out_dir << ": best val "
            << art.best_val_metric << " at epoch " << art.best_epoch;
  if (art.test_report) std::cout << ", test " << art.test_report->aggregate;
  std::cout << "\n";
  return kExitOk;
}

}  // namespace

int cmd_train(const TrainArgs& args) {
  ResolvedConfig rc;
  RunInputs inputs;
  try {
    std::map<std::string, std::string> file_cfg;
    if (!args.config_path.empty()) file_cfg = read_config_file(args.config_path);
    rc = resolve_config(file_cfg, args.overrides);

    std::uint64_t seed = rc.train.seed;
    if (args.seed >= 0) seed = static_cast<std::uint64_t>(args.seed);
    if (const char* env = std::getenv("IBIO_SEED")) {
      seed = std::strtoull(env, nullptr, 10);
    }
    rc.train.seed = seed;

    const train::TrainMode mode = train::mode_from_string(args.mode);
    if (mode == train::TrainMode::kUps &&
        rc.task.kind != data::TaskKind::kClassification) {
      std::cerr << "UnsupportedTask: ups requires a classification task\n";
      return kExitUsage;
    }

    if (!args.from_hybrid.empty()) {
      std::optional<double> min_conf;
      if (args.min_confidence >= 0.0) min_conf = args.min_confidence;
      inputs.hybrid = data::import_hybrid(args.from_hybrid, min_conf);
      inputs.hybrid.task = rc.task;
      inputs.hybrid.task.n_tasks =
          inputs.hybrid.rows.empty()
              ? 1
              : static_cast<int>(inputs.hybrid.rows.front().labels.size());
      inputs.files.push_back(args.from_hybrid);
    }
    if (args.data_dir.empty()) {
      std::cerr << "--data is required\n";
      return kExitUsage;
    }
    inputs.train = data::load_labeled_csv(args.data_dir + "/train.csv", rc.task);
    inputs.val = data::load_labeled_csv(args.data_dir + "/val.csv", rc.task);
    inputs.files.push_back(args.data_dir + "/train.csv");
    inputs.files.push_back(args.data_dir + "/val.csv");
    if (fs::exists(args.data_dir + "/test.csv")) {
      inputs.test = data::load_labeled_csv(args.data_dir + "/test.csv", rc.task);
      inputs.files.push_back(args.data_dir + "/test.csv");
    }

    const bool wants_pool = mode == train::TrainMode::kInstructBio ||
                            mode == train::TrainMode::kNaivePseudoLabel ||
                            mode == train::TrainMode::kPiModel ||
                            mode == train::TrainMode::kUps;
    if (!args.unlabeled_path.empty()) {
      if (!wants_pool) {
        std::cerr << "warning: --unlabeled ignored in mode '" << args.mode
                  << "'\n";
      } else {
        inputs.pool = data::load_unlabeled_pool(args.unlabeled_path);
        inputs.files.push_back(args.unlabeled_path);
        if (rc.pool_subsample > 0 && rc.pool_subsample < inputs.pool.size()) {
          inputs.pool =
              data::subsample_pool(inputs.pool, rc.pool_subsample, seed);
        }
      }
    } else if (wants_pool && args.from_hybrid.empty()) {
      std::cerr << "mode '" << args.mode << "' needs --unlabeled\n";
      return kExitUsage;
    }

    if (!args.embeddings_path.empty()) {
      inputs.embeddings =
          models::EmbeddingTable::import_file(args.embeddings_path);
      inputs.files.push_back(args.embeddings_path);
    }

    if (args.out_dir.empty()) {
      std::cerr << "--out is required\n";
      return kExitUsage;
    }

    if (args.seed_sweep <= 1) {
      return run_single(args, rc, inputs, seed, args.out_dir, nullptr);
    }

    // Seed sweep: independent runs in seed_<s> subdirectories, optionally in
    // parallel worker processes.
    int workers = 1;
    if (const char* env = std::getenv("IBIO_WORKERS")) {
      workers = std::max(1, std::atoi(env));
    }
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < args.seed_sweep; ++i) seeds.push_back(seed + i);

    std::vector<double> test_metrics(seeds.size(),
                                     std::numeric_limits<double>::quiet_NaN());
    if (workers <= 1) {
      for (std::size_t i = 0; i < seeds.size(); ++i) {
        const int rc_run =
            run_single(args, rc, inputs, seeds[i],
                       args.out_dir + "/seed_" + std::to_string(seeds[i]),
                       &test_metrics[i]);
        if (rc_run != kExitOk) return rc_run;
      }
    } else {
      std::size_t next = 0;
      std::vector<std::pair<pid_t, std::size_t>> running;
      bool failed = false;
      while ((next < seeds.size() || !running.empty()) && !failed) {
        while (next < seeds.size() &&
               running.size() < static_cast<std::size_t>(workers)) {
          const std::size_t idx = next++;
          const pid_t pid = fork();
          if (pid == 0) {
            const int rc_run = run_single(
                args, rc, inputs, seeds[idx],
                args.out_dir + "/seed_" + std::to_string(seeds[idx]), nullptr);
            _exit(rc_run);
          }
          running.emplace_back(pid, idx);
        }
        int status = 0;
        const pid_t done = wait(&status);
        for (std::size_t r = 0; r < running.size(); ++r) {
          if (running[r].first != done) continue;
          if (!WIFEXITED(status) || WEXITSTATUS(status) != kExitOk) failed = true;
          running.erase(running.begin() + r);
          break;
        }
      }
      for (const auto& [pid, idx] : running) {
        (void)idx;
        int status = 0;
        waitpid(pid, &status, 0);
      }
      if (failed) return kExitRuntimeAbort;
      // Collect test metrics from the children's metrics.json files.
      for (std::size_t i = 0; i < seeds.size(); ++i) {
        std::ifstream in(args.out_dir + "/seed_" + std::to_string(seeds[i]) +
                         "/metrics.json");
        if (!in) continue;
        nlohmann::json j = nlohmann::json::parse(in);
        if (j.contains("test")) test_metrics[i] = j["test"]["aggregate"];
      }
    }

    double mean = 0.0, count = 0.0;
    for (double v : test_metrics) {
      if (!std::isnan(v)) {
        mean += v;
        count += 1.0;
      }
    }
    mean = count > 0 ? mean / count : std::numeric_limits<double>::quiet_NaN();
    double var = 0.0;
    for (double v : test_metrics) {
      if (!std::isnan(v)) var += (v - mean) * (v - mean);
    }
    var = count > 0 ? var / count : 0.0;

    nlohmann::json summary;
    summary["mode"] = args.mode;
    summary["seeds"] = seeds;
    summary["test_metrics"] = test_metrics;
    summary["test_mean"] = mean;
    summary["test_std"] = std::sqrt(var);
    fs::create_directories(args.out_dir);
    write_text_file(args.out_dir + "/sweep_summary.json", summary.dump(2) + "\n");
    std::cout << "sweep of " << seeds.size() << " seeds: test mean " << mean
              << " std " << std::sqrt(var) << "\n";
    return kExitOk;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kNonFiniteLoss) {
      std::cerr << e.what() << "\n";
      return kExitRuntimeAbort;
    }
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "train failed: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace ibio::cli
