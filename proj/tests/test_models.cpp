// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "ibio/chem/smiles.hpp"
#include "ibio/common/error.hpp"
#include "ibio/data/synthetic.hpp"
#include "ibio/models/checkpoint.hpp"
#include "ibio/models/embeddings.hpp"
#include "ibio/models/graph_batch.hpp"
#include "ibio/models/instructor_model.hpp"
#include "ibio/models/target_model.hpp"
#include "ibio/tensor/ops.hpp"

using namespace ibio;
namespace op = tk::ops;
using models::GraphBatch;
using models::StochasticCtx;

namespace {

models::TargetModelConfig small_config(models::Readout readout) {
  models::TargetModelConfig cfg;
  cfg.n_layers = 2;
  cfg.node_hidden = 32;
  cfg.edge_hidden = 16;
  cfg.head_layers = 2;
  cfg.dropout = 0.0;
  cfg.readout = readout;
  cfg.n_tasks = 2;
  return cfg;
}

}  // namespace

TEST_CASE("config bounds are enforced") {
  models::TargetModelConfig cfg = small_config(models::Readout::kMean);
  cfg.n_layers = 7;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = small_config(models::Readout::kMean);
  cfg.node_hidden = 16;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = small_config(models::Readout::kMean);
  cfg.dropout = 0.7;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("batch shapes and graph ids") {
  chem::MolGraph a = chem::parse_smiles("CCO");
  chem::MolGraph b = chem::parse_smiles("c1ccccc1");
  GraphBatch batch = GraphBatch::build({&a, &b});
  CHECK(batch.n_graphs == 2);
  CHECK(batch.n_atoms() == 9);
  CHECK(batch.graph_id.front() == 0);
  CHECK(batch.graph_id.back() == 1);
  CHECK(batch.edge_dst.size() == 2 * (2 + 6));
  CHECK(std::is_sorted(batch.edge_dst.begin(), batch.edge_dst.end()));
  CHECK_THROWS_AS(GraphBatch::build({}), Error);
}

TEST_CASE("predictions have one scalar per task per graph") {
  models::TargetModel f =
      models::TargetModel::init(small_config(models::Readout::kMean), 5);
  chem::MolGraph a = chem::parse_smiles("CCO");
  chem::MolGraph b = chem::parse_smiles("CCN");
  chem::MolGraph c = chem::parse_smiles("c1ccncc1");
  GraphBatch batch = GraphBatch::build({&a, &b, &c});
  tk::Tape tape;
  StochasticCtx ctx;
  models::TargetForward out = f.forward(tape, batch, ctx);
  CHECK(tape.value(out.predictions).shape() ==
        std::vector<std::size_t>{3, 2});
  CHECK(tape.value(out.graph_embeddings).shape() ==
        std::vector<std::size_t>{3, 32});
}

TEST_CASE("single atom with sum readout embeds that atom") {
  models::TargetModelConfig cfg = small_config(models::Readout::kSum);
  models::TargetModel f = models::TargetModel::init(cfg, 6);
  chem::MolGraph one = chem::parse_smiles("C");
  GraphBatch batch = GraphBatch::build({&one});
  tk::Tape tape;
  StochasticCtx ctx;
  models::TargetForward out = f.forward(tape, batch, ctx);
  // With one atom the sum readout must equal that atom's final features:
  // compare against mean readout, which is identical for a single atom.
  models::TargetModel g = f;
  GraphBatch batch2 = GraphBatch::build({&one});
  tk::Tape tape2;
  models::TargetForward out2 = g.forward(tape2, batch2, ctx);
  CHECK(tape.value(out.graph_embeddings).values() ==
        tape2.value(out2.graph_embeddings).values());
  CHECK(tape.value(out.graph_embeddings).rows() == 1);
}

TEST_CASE("atom permutation leaves embeddings and predictions unchanged") {
  for (auto readout : {models::Readout::kMean, models::Readout::kSum,
                       models::Readout::kAttention}) {
    models::TargetModel f = models::TargetModel::init(small_config(readout), 7);
    // Two renderings of one molecule = a relabeling of the atom order.
    chem::MolGraph a = chem::parse_smiles("CC(=O)Oc1ccccc1C(=O)O");
    chem::MolGraph b = chem::parse_smiles("OC(=O)c1ccccc1OC(C)=O");
    GraphBatch ba = GraphBatch::build({&a});
    GraphBatch bb = GraphBatch::build({&b});
    tk::Tape ta, tb;
    StochasticCtx ctx;
    models::TargetForward fa = f.forward(ta, ba, ctx);
    models::TargetForward fb = f.forward(tb, bb, ctx);
    const auto& pa = ta.value(fa.predictions);
    const auto& pb = tb.value(fb.predictions);
    for (std::size_t i = 0; i < pa.size(); ++i) {
      CHECK(pa[i] == doctest::Approx(pb[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("batch order equivariance") {
  models::TargetModel f =
      models::TargetModel::init(small_config(models::Readout::kMean), 8);
  chem::MolGraph a = chem::parse_smiles("CCO");
  chem::MolGraph b = chem::parse_smiles("c1ccccc1N");
  GraphBatch fwd_ab = GraphBatch::build({&a, &b});
  GraphBatch fwd_ba = GraphBatch::build({&b, &a});
  tk::Tape ta, tb;
  StochasticCtx ctx;
  auto ra = f.forward(ta, fwd_ab, ctx);
  auto rb = f.forward(tb, fwd_ba, ctx);
  const auto& pa = ta.value(ra.predictions);
  const auto& pb = tb.value(rb.predictions);
  for (int t = 0; t < 2; ++t) {
    CHECK(pa.at(0, t) == doctest::Approx(pb.at(1, t)).epsilon(1e-12));
    CHECK(pa.at(1, t) == doctest::Approx(pb.at(0, t)).epsilon(1e-12));
  }
}

TEST_CASE("deterministic init under a seed") {
  models::TargetModel a =
      models::TargetModel::init(small_config(models::Readout::kMean), 42);
  models::TargetModel b =
      models::TargetModel::init(small_config(models::Readout::kMean), 42);
  for (const auto& [name, tensor] : a.params().entries()) {
    CHECK(tensor.values() == b.params().at(name).values());
  }
}

TEST_CASE("fresh instructor scores one half everywhere") {
  models::InstructorConfig cfg;
  cfg.embedding_dim = 8;
  cfg.n_tasks = 1;
  cfg.hidden = 16;
  models::InstructorModel g = models::InstructorModel::init(cfg, 3);
  tk::Tensor inputs({4, static_cast<std::size_t>(cfg.input_dim())});
  tk::SeededRng rng(4);
  tk::RngStream s = rng.stream("in");
  for (auto& v : inputs.values()) v = s.uniform(-2, 2);
  tk::Tape tape;
  models::InstructorForward fwd = g.forward(tape, inputs);
  for (double p : tape.value(fwd.confidence).values()) {
    CHECK(p == 0.5);
  }
  // Determinism: same inputs, same outputs.
  tk::Tape tape2;
  models::InstructorForward fwd2 = g.forward(tape2, inputs);
  CHECK(tape.value(fwd.confidence).values() ==
        tape2.value(fwd2.confidence).values());
}

TEST_CASE("checkpoint round trip is bit exact and rejects corruption") {
  models::TargetModel f =
      models::TargetModel::init(small_config(models::Readout::kMean), 11);
  std::map<std::string, tk::Tensor> arrays;
  models::collect_params(f.params(), "f/", arrays);
  nlohmann::json meta;
  meta["seed"] = 11;
  meta["val_metric"] = 0.5;
  const std::string path = "/tmp/ibio_test_ckpt.bin";
  models::save_checkpoint(path, meta, arrays);

  models::Checkpoint loaded = models::load_checkpoint(path);
  models::TargetModel f2 =
      models::TargetModel::init(small_config(models::Readout::kMean), 999);
  models::restore_params(loaded, "f/", f2.params());
  for (const auto& [name, tensor] : f.params().entries()) {
    CHECK(tensor.values() == f2.params().at(name).values());
  }

  // Truncation -> CorruptCheckpoint.
  {
    std::ifstream in(path, std::ios::binary);
    std::string all((std::istreambuf_iterator<char>(in)), {});
    std::ofstream out("/tmp/ibio_test_ckpt_trunc.bin", std::ios::binary);
    out.write(all.data(), static_cast<std::streamsize>(all.size() / 2));
  }
  try {
    models::load_checkpoint("/tmp/ibio_test_ckpt_trunc.bin");
    FAIL("expected CorruptCheckpoint");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kCorruptCheckpoint);
  }

  // Architecture mismatch -> ShapeMismatch.
  models::TargetModelConfig other = small_config(models::Readout::kMean);
  other.n_layers = 3;
  models::TargetModel f3 = models::TargetModel::init(other, 1);
  try {
    models::restore_params(loaded, "f/", f3.params());
    FAIL("expected ShapeMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kShapeMismatch);
  }
  std::remove(path.c_str());
  std::remove("/tmp/ibio_test_ckpt_trunc.bin");
}

TEST_CASE("embedding import: csv, jsonl, and typed failures") {
  {
    std::ofstream out("/tmp/ibio_test_emb.csv");
    out << "smiles,v0,v1,v2\nCCO,1,2,3\nCCN,4,5,6\nc1ccccc1,7,8,9\n";
  }
  models::EmbeddingTable t =
      models::EmbeddingTable::import_file("/tmp/ibio_test_emb.csv");
  CHECK(t.size() == 3);
  CHECK(t.width() == 3);
  CHECK(t.lookup("CCN") == std::vector<double>{4, 5, 6});
  try {
    t.lookup("CCCC");
    FAIL("expected MissingEmbedding");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingEmbedding);
  }

  {
    std::ofstream out("/tmp/ibio_test_emb_dup.csv");
    out << "CCO,1,2\nCCO,3,4\n";
  }
  try {
    models::EmbeddingTable::import_file("/tmp/ibio_test_emb_dup.csv");
    FAIL("expected DuplicateKey");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDuplicateKey);
  }

  {
    std::ofstream out("/tmp/ibio_test_emb_w.csv");
    out << "CCO,1,2\nCCN,3\n";
  }
  try {
    models::EmbeddingTable::import_file("/tmp/ibio_test_emb_w.csv");
    FAIL("expected WidthMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kWidthMismatch);
  }

  {
    std::ofstream out("/tmp/ibio_test_emb.jsonl");
    out << R"({"smiles":"CCO","embedding":[1.5,2.5]})" << "\n"
        << R"({"smiles":"CCN","embedding":[3.5,4.5]})" << "\n";
  }
  models::EmbeddingTable j =
      models::EmbeddingTable::import_file("/tmp/ibio_test_emb.jsonl");
  CHECK(j.size() == 2);
  CHECK(j.width() == 2);
  std::remove("/tmp/ibio_test_emb.csv");
  std::remove("/tmp/ibio_test_emb_dup.csv");
  std::remove("/tmp/ibio_test_emb_w.csv");
  std::remove("/tmp/ibio_test_emb.jsonl");
}

TEST_CASE("dropout draws are position-stable across batch compositions") {
  // The labeled-first batch layout plus index-keyed masks means a molecule's
  // dropout pattern ignores whatever rides behind it in the batch.
  models::TargetModelConfig cfg = small_config(models::Readout::kMean);
  cfg.dropout = 0.4;
  models::TargetModel f = models::TargetModel::init(cfg, 13);
  chem::MolGraph a = chem::parse_smiles("CCOC");
  chem::MolGraph b = chem::parse_smiles("c1ccccc1");

  tk::SeededRng run_rng(1000);
  StochasticCtx ctx;
  ctx.train = true;
  ctx.rng = &run_rng;
  ctx.epoch = 3;
  ctx.step = 9;

  GraphBatch alone = GraphBatch::build({&a});
  GraphBatch with_b = GraphBatch::build({&a, &b});
  tk::Tape t1, t2;
  auto r1 = f.forward(t1, alone, ctx);
  auto r2 = f.forward(t2, with_b, ctx);
  const auto& p1 = t1.value(r1.predictions);
  const auto& p2 = t2.value(r2.predictions);
  for (int t = 0; t < 2; ++t) {
    CHECK(p1.at(0, t) == p2.at(0, t));
  }
}
