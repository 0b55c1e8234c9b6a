// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include "cli_common.hpp"

#include <fstream>
#include <sstream>

#include "ibio/common/error.hpp"
#include "ibio/common/version.hpp"
#include "ibio/models/checkpoint.hpp"
#include "ibio/tensor/rng.hpp"

namespace ibio::cli {

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::kIoError, "cannot open config " + path);
  std::map<std::string, std::string> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) {
        raise(ErrorCode::kConfigError,
              path + ":" + std::to_string(line_no) + ": expected key = value");
      }
      continue;
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      raise(ErrorCode::kConfigError,
            path + ":" + std::to_string(line_no) + ": empty key");
    }
    out[key] = value;
  }
  return out;
}

namespace {

int to_int(const std::string& key, const std::string& v) {
  try {
    return std::stoi(v);
  } catch (...) {
    raise(ErrorCode::kConfigError, key + ": expected integer, got '" + v + "'");
  }
}

double to_double(const std::string& key, const std::string& v) {
  try {
    return std::stod(v);
  } catch (...) {
    raise(ErrorCode::kConfigError, key + ": expected number, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  raise(ErrorCode::kConfigError, key + ": expected boolean, got '" + v + "'");
}

}  // namespace

ResolvedConfig resolve_config(const std::map<std::string, std::string>& file,
                              const std::vector<std::string>& overrides) {
  std::map<std::string, std::string> merged = file;
  for (const std::string& ov : overrides) {
    const std::size_t eq = ov.find('=');
    if (eq == std::string::npos) {
      raise(ErrorCode::kConfigError, "override '" + ov + "' is not key=value");
    }
    merged[ov.substr(0, eq)] = ov.substr(eq + 1);
  }

  ResolvedConfig out;
  for (const auto& [key, value] : merged) {
    if (key == "epochs") out.train.epochs = to_int(key, value);
    else if (key == "batch") out.train.batch = to_int(key, value);
    else if (key == "lr") out.train.lr = to_double(key, value);
    else if (key == "warmup_ratio") out.train.warmup_ratio = to_double(key, value);
    else if (key == "k") out.train.k = to_int(key, value);
    else if (key == "alpha") out.train.alpha = to_double(key, value);
    else if (key == "lambda") out.train.lambda = to_double(key, value);
    else if (key == "pretrain_f_epochs") out.train.pretrain_f_epochs = to_int(key, value);
    else if (key == "pretrain_g_epochs") out.train.pretrain_g_epochs = to_int(key, value);
    else if (key == "early_stop_patience") out.train.early_stop_patience = to_int(key, value);
    else if (key == "plateau_lr_patience") out.train.plateau_lr_patience = to_int(key, value);
    else if (key == "plateau_lr_factor") out.train.plateau_lr_factor = to_double(key, value);
    else if (key == "weight_decay") out.train.weight_decay = to_double(key, value);
    else if (key == "seed") out.train.seed = static_cast<std::uint64_t>(std::stoull(value));
    else if (key == "loss") out.train.loss = train::loss_kind_from_string(value);
    else if (key == "floor_pseudo_weight_at_zero")
      out.train.floor_pseudo_weight_at_zero = to_bool(key, value);
    else if (key == "ups_gamma1") out.train.ups_gamma1 = to_double(key, value);
    else if (key == "ups_gamma2") out.train.ups_gamma2 = to_double(key, value);
    else if (key == "pi_ramp_fraction") out.train.pi_ramp_fraction = to_double(key, value);
    else if (key == "task") {
      if (value == "regression") out.task.kind = data::TaskKind::kRegression;
      else if (value == "classification") out.task.kind = data::TaskKind::kClassification;
      else raise(ErrorCode::kConfigError, "task: '" + value + "'");
    }
    else if (key == "n_layers") out.model.n_layers = to_int(key, value);
    else if (key == "node_hidden") out.model.node_hidden = to_int(key, value);
    else if (key == "edge_hidden") out.model.edge_hidden = to_int(key, value);
    else if (key == "head_layers") out.model.head_layers = to_int(key, value);
    else if (key == "dropout") out.model.dropout = to_double(key, value);
    else if (key == "readout") out.model.readout = models::readout_from_string(value);
    else if (key == "instructor_hidden") out.instructor_hidden = to_int(key, value);
    else if (key == "pool_subsample")
      out.pool_subsample = static_cast<std::size_t>(std::stoull(value));
    else raise(ErrorCode::kConfigError, "unknown config key '" + key + "'");
  }

  // Default task loss pairing: classification uses bce.
  if (out.task.kind == data::TaskKind::kClassification &&
      merged.find("loss") == merged.end()) {
    out.train.loss = train::LossKind::kBce;
  }
  out.raw = std::move(merged);
  return out;
}

std::uint64_t fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::kIoError, "cannot open " + path);
  std::uint64_t h = 0xCBF29CE484222325ULL;
  char buf[8192];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001B3ULL;
    }
    if (in.eof()) break;
  }
  return h;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::kIoError, "cannot write " + path);
  out << content;
}

nlohmann::json manifest_json(const std::string& command,
                             const std::string& config_path,
                             const ResolvedConfig& cfg,
                             const std::vector<std::string>& data_files,
                             std::uint64_t seed) {
  nlohmann::json j;
  j["command"] = command;
  j["tool_version"] = kVersionString;
  j["config_path"] = config_path;
  j["seed"] = seed;
  nlohmann::json resolved;
  for (const auto& [k, v] : cfg.raw) resolved[k] = v;
  j["resolved_config"] = std::move(resolved);
  nlohmann::json hashes;
  for (const std::string& f : data_files) {
    hashes[f] = fnv1a_file(f);
  }
  j["dataset_hashes"] = std::move(hashes);
  return j;
}

void save_model_checkpoint(const std::string& path,
                           const models::TargetModel& f,
                           const models::InstructorModel* g,
                           const data::TaskSpec& task,
                           const data::Normalizer& normalizer,
                           double val_metric, std::uint64_t seed,
                           train::LossKind loss) {
  std::map<std::string, tk::Tensor> arrays;
  models::collect_params(f.params(), "f/", arrays);
  if (g) models::collect_params(g->params(), "g/", arrays);

  nlohmann::json meta;
  meta["seed"] = seed;
  meta["val_metric"] = val_metric;
  meta["loss"] = train::loss_kind_to_string(loss);
  meta["task"] = {{"kind", task.is_classification() ? "classification" : "regression"},
                  {"n_tasks", task.n_tasks}};
  const models::TargetModelConfig& mc = f.config();
  meta["model"] = {{"n_layers", mc.n_layers},
                   {"node_hidden", mc.node_hidden},
                   {"edge_hidden", mc.edge_hidden},
                   {"head_layers", mc.head_layers},
                   {"dropout", mc.dropout},
                   {"readout", models::readout_to_string(mc.readout)},
                   {"n_tasks", mc.n_tasks},
                   {"feature_dim", mc.feature_dim},
                   {"init_seed", f.init_seed()}};
  if (g) {
    meta["instructor"] = {{"embedding_dim", g->config().embedding_dim},
                          {"n_tasks", g->config().n_tasks},
                          {"hidden", g->config().hidden}};
  }
  meta["normalizer"] = {{"means", normalizer.means()},
                        {"stds", normalizer.stds()}};
  models::save_checkpoint(path, meta, arrays);
}

LoadedCheckpoint load_model_checkpoint(const std::string& path) {
  models::Checkpoint ckpt = models::load_checkpoint(path);
  const nlohmann::json& meta = ckpt.header;

  models::TargetModelConfig mc;
  mc.n_layers = meta.at("model").at("n_layers").get<int>();
  mc.node_hidden = meta.at("model").at("node_hidden").get<int>();
  mc.edge_hidden = meta.at("model").at("edge_hidden").get<int>();
  mc.head_layers = meta.at("model").at("head_layers").get<int>();
  mc.dropout = meta.at("model").at("dropout").get<double>();
  mc.readout = models::readout_from_string(
      meta.at("model").at("readout").get<std::string>());
  mc.n_tasks = meta.at("model").at("n_tasks").get<int>();
  mc.feature_dim = meta.at("model").at("feature_dim").get<int>();

  LoadedCheckpoint out{
      models::TargetModel::init(mc, meta.at("model").at("init_seed").get<std::uint64_t>()),
      std::nullopt,
      {},
      data::Normalizer::identity(mc.n_tasks),
      meta.value("val_metric", 0.0),
      train::loss_kind_from_string(meta.value("loss", "mse"))};
  models::restore_params(ckpt, "f/", out.f.params());

  if (meta.contains("instructor")) {
    models::InstructorConfig gc;
    gc.embedding_dim = meta.at("instructor").at("embedding_dim").get<int>();
    gc.n_tasks = meta.at("instructor").at("n_tasks").get<int>();
    gc.hidden = meta.at("instructor").at("hidden").get<int>();
    out.g = models::InstructorModel::init(gc, 0);
    models::restore_params(ckpt, "g/", out.g->params());
  }

  out.task.kind = meta.at("task").at("kind").get<std::string>() == "classification"
                      ? data::TaskKind::kClassification
                      : data::TaskKind::kRegression;
  out.task.n_tasks = meta.at("task").at("n_tasks").get<int>();
  out.normalizer = data::Normalizer::from_moments(
      meta.at("normalizer").at("means").get<std::vector<double>>(),
      meta.at("normalizer").at("stds").get<std::vector<double>>());
  return out;
}

}  // namespace ibio::cli
