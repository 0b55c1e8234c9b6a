// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <iostream>

#include "cli_common.hpp"
#include "commands.hpp"
#include "ibio/common/error.hpp"
#include "ibio/data/loaders.hpp"
#include "ibio/models/graph_batch.hpp"
#include "ibio/train/engine.hpp"

namespace ibio::cli {

int cmd_eval(const EvalArgs& args) {
  try {
    LoadedCheckpoint ckpt = load_model_checkpoint(args.checkpoint);
    data::Dataset ds =
        data::load_labeled_csv(args.data_csv, ckpt.task, args.smiles_column);

    metrics::MetricReport primary =
        train::evaluate_model(ckpt.f, ds, ckpt.normalizer);
    nlohmann::json out;
    out["checkpoint"] = args.checkpoint;
    out["checkpoint_val_metric"] = ckpt.val_metric;
    out["data"] = args.data_csv;
    out["rows"] = ds.size();
    out["skipped_rows"] = ds.skipped_rows;
    out["primary"] =
        nlohmann::json::parse(metrics::metric_report_to_json(primary));
    if (!ckpt.task.is_classification()) {
      metrics::MetricReport mae =
          train::evaluate_model_mae(ckpt.f, ds, ckpt.normalizer);
      out["mae"] = nlohmann::json::parse(metrics::metric_report_to_json(mae));
    }

    if (!args.dump_preds.empty()) {
      std::vector<const chem::MolGraph*> graphs;
      for (const auto& s : ds.samples) graphs.push_back(&s.graph);
      models::GraphBatch batch = models::GraphBatch::build(graphs);
      tk::Tape tape;
      models::StochasticCtx ctx;
      models::TargetForward fwd = ckpt.f.forward(tape, batch, ctx);
      const tk::Tensor& preds = tape.value(fwd.predictions);
      std::ofstream csv(args.dump_preds);
      csv << "smiles";
      for (int t = 0; t < ckpt.task.n_tasks; ++t) csv << ",pred_" << t;
      csv << "\n";
      csv.precision(17);
      for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        csv << ds.samples[i].smiles;
        for (int t = 0; t < ckpt.task.n_tasks; ++t) {
          const double v = ckpt.task.is_classification()
                               ? preds.at(i, t)
                               : ckpt.normalizer.invert(preds.at(i, t), t);
          csv << "," << v;
        }
        csv << "\n";
      }
    }

    if (!args.out_json.empty()) {
      write_text_file(args.out_json, out.dump(2) + "\n");
    } else {
      std::cout << out.dump(2) << "\n";
    }
    std::cout << "eval " << primary.metric << " = " << primary.aggregate
              << " over " << ds.size() << " rows\n";
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "eval failed: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_export_hybrid(const ExportArgs& args) {
  try {
    const std::string src = args.run_dir + "/hybrid.jsonl";
    data::HybridDatabase db = data::import_hybrid(src, args.min_confidence);
    if (db.pseudo_count() == 0 && args.min_confidence > 0.0) {
      std::cerr << "confidence filter " << args.min_confidence
                << " removed every pseudo row\n";
      return kExitUsage;
    }
    if (db.rows.empty()) {
      std::cerr << "empty filter result\n";
      return kExitUsage;
    }
    data::export_hybrid(db, args.out_path);
    std::cout << "exported " << db.size() << " rows (" << db.pseudo_count()
              << " pseudo) to " << args.out_path << "\n";
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "export failed: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace ibio::cli
