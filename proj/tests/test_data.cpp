// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>

#include "ibio/chem/scaffold.hpp"
#include "ibio/chem/smiles.hpp"
#include "ibio/common/error.hpp"
#include "ibio/data/hybrid.hpp"
#include "ibio/data/loaders.hpp"
#include "ibio/data/normalizer.hpp"
#include "ibio/data/split.hpp"
#include "ibio/data/synthetic.hpp"

using namespace ibio;
using data::Dataset;
using data::TaskKind;
using data::TaskSpec;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& content)
      : path("/tmp/ibio_test_" + name) {
    std::ofstream out(path);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

TaskSpec regression1() {
  TaskSpec t;
  t.kind = TaskKind::kRegression;
  t.n_tasks = 1;
  return t;
}

}  // namespace

TEST_CASE("csv loader skips unparsable rows and masks missing labels") {
  TempFile f("load.csv",
             "smiles,y1,y2\n"
             "CCO,1.5,2.0\n"
             "C1CC,0.1,0.2\n"
             "c1ccccc1,,3.5\n"
             "CCN,2.5,\n"
             "CC(C)O,1.0,1.0\n");
  TaskSpec spec;
  spec.kind = TaskKind::kRegression;
  Dataset ds = data::load_labeled_csv(f.path, spec);
  CHECK(ds.size() == 4);
  CHECK(ds.skipped_rows == 1);
  CHECK(ds.task.n_tasks == 2);
  CHECK(ds.samples[1].mask[0] == 0);
  CHECK(ds.samples[1].mask[1] == 1);
  CHECK(ds.samples[1].labels[1] == 3.5);
}

TEST_CASE("csv loader errors are typed") {
  TempFile f("nocol.csv", "structure,y\nCCO,1\n");
  try {
    data::load_labeled_csv(f.path, regression1());
    FAIL("expected MissingColumn");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingColumn);
  }
  TempFile g("empty.csv", "smiles,y\n");
  try {
    data::load_labeled_csv(g.path, regression1());
    FAIL("expected EmptyDataset");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyDataset);
  }
}

TEST_CASE("unlabeled pool accepts plain lists and csv") {
  TempFile plain("pool.smi", "CCO\nCCC\nbogus((\nc1ccccc1\n");
  data::UnlabeledPool pool = data::load_unlabeled_pool(plain.path);
  CHECK(pool.size() == 3);
  CHECK(pool.skipped_rows == 1);

  TempFile csv("pool.csv", "smiles,zinc_id\nCCO,1\nCCN,2\n");
  data::UnlabeledPool pool2 = data::load_unlabeled_pool(csv.path);
  CHECK(pool2.size() == 2);
}

TEST_CASE("pool subsampling is deterministic and bounded") {
  data::UnlabeledPool pool;
  for (int i = 0; i < 500; ++i) {
    std::string s = "C";
    for (int j = 0; j < i % 7; ++j) s += "C";
    pool.smiles.push_back(s + "O");
    pool.graphs.push_back(chem::parse_smiles(pool.smiles.back()));
  }
  data::UnlabeledPool a = data::subsample_pool(pool, 100, 7);
  data::UnlabeledPool b = data::subsample_pool(pool, 100, 7);
  CHECK(a.smiles == b.smiles);

  data::UnlabeledPool full = data::subsample_pool(pool, 500, 9);
  CHECK(full.size() == 500);

  CHECK_THROWS_AS(data::subsample_pool(pool, 501, 1), Error);
}

TEST_CASE("subsample overlap across seeds matches the hypergeometric scale") {
  data::UnlabeledPool pool;
  for (int i = 0; i < 2000; ++i) {
    pool.smiles.push_back("C" + std::to_string(i));
    pool.graphs.emplace_back();
  }
  data::UnlabeledPool a = data::subsample_pool(pool, 400, 1);
  data::UnlabeledPool b = data::subsample_pool(pool, 400, 2);
  std::set<std::string> sa(a.smiles.begin(), a.smiles.end());
  int overlap = 0;
  for (const auto& s : b.smiles) overlap += sa.count(s) ? 1 : 0;
  // E = k^2/n = 80; 5 sigma is roughly +/- 40.
  CHECK(overlap > 40);
  CHECK(overlap < 120);
}

TEST_CASE("scaffold split keeps groups atomic and disjoint") {
  data::SyntheticFixtureConfig cfg;
  cfg.n_labeled = 300;
  cfg.n_val = 0;
  cfg.n_test = 0;
  cfg.n_unlabeled = 0;
  cfg.seed = 11;
  data::SyntheticFixture fx = data::make_synthetic_fixture(cfg);

  data::SplitResult split = data::scaffold_split(fx.train, {}, 0);
  auto keys_of = [](const Dataset& ds) {
    std::set<std::string> keys;
    for (const auto& s : ds.samples) keys.insert(chem::scaffold_key(s.graph));
    return keys;
  };
  const auto ktrain = keys_of(split.train);
  const auto kval = keys_of(split.val);
  const auto ktest = keys_of(split.test);
  for (const auto& k : kval) CHECK(ktrain.count(k) == 0);
  for (const auto& k : ktest) CHECK(ktrain.count(k) == 0);
  for (const auto& k : ktest) CHECK(kval.count(k) == 0);
  CHECK(split.train.size() + split.val.size() + split.test.size() == 300);
  CHECK(split.train.size() >= 200);
}

TEST_CASE("single shared scaffold lands everything in train") {
  Dataset ds;
  ds.task = regression1();
  for (int i = 1; i <= 10; ++i) {
    data::LabeledSample s;
    std::string side(i, 'C');
    s.smiles = side + "c1ccccc1";
    s.graph = chem::parse_smiles(s.smiles);
    s.labels = {static_cast<double>(i)};
    s.mask = {1};
    ds.samples.push_back(std::move(s));
  }
  data::SplitResult split = data::scaffold_split(ds, {}, 0);
  CHECK(split.train.size() == 10);
  CHECK(split.val.size() == 0);
  CHECK(split.test.size() == 0);
}

TEST_CASE("all-distinct scaffolds give exact 80/10/10") {
  Dataset ds;
  ds.task = regression1();
  for (int i = 0; i < 100; ++i) {
    const int ring = 3 + i;
    std::string s = "C1" + std::string(ring - 2, 'C') + "C1";
    data::LabeledSample sample;
    sample.smiles = s;
    sample.graph = chem::parse_smiles(s);
    sample.labels = {1.0};
    sample.mask = {1};
    ds.samples.push_back(std::move(sample));
  }
  data::SplitResult split = data::scaffold_split(ds, {}, 0);
  CHECK(split.train.size() == 80);
  CHECK(split.val.size() == 10);
  CHECK(split.test.size() == 10);
}

TEST_CASE("random split cuts by rounded ratios deterministically") {
  Dataset ds;
  ds.task = regression1();
  for (int i = 0; i < 10; ++i) {
    data::LabeledSample s;
    s.smiles = "C" + std::string(i, 'C');
    s.graph = chem::parse_smiles(s.smiles);
    s.labels = {static_cast<double>(i)};
    s.mask = {1};
    ds.samples.push_back(std::move(s));
  }
  data::SplitResult a = data::random_split(ds, {}, 3);
  CHECK(a.train.size() == 8);
  CHECK(a.val.size() == 1);
  CHECK(a.test.size() == 1);

  data::SplitResult b = data::random_split(ds, {}, 3);
  for (std::size_t i = 0; i < a.train.size(); ++i) {
    CHECK(a.train.samples[i].smiles == b.train.samples[i].smiles);
  }
}

TEST_CASE("different seeds shuffle differently") {
  data::SyntheticFixtureConfig cfg;
  cfg.n_labeled = 1000;
  cfg.n_val = 0;
  cfg.n_test = 0;
  cfg.n_unlabeled = 0;
  cfg.seed = 21;
  data::SyntheticFixture fx = data::make_synthetic_fixture(cfg);
  data::SplitResult a = data::random_split(fx.train, {}, 1);
  data::SplitResult b = data::random_split(fx.train, {}, 2);
  int diff = 0;
  for (std::size_t i = 0; i < a.train.size(); ++i) {
    diff += a.train.samples[i].smiles != b.train.samples[i].smiles ? 1 : 0;
  }
  CHECK(diff > 0);
}

TEST_CASE("normalizer moments and round trip") {
  Dataset ds;
  ds.task = regression1();
  for (double v : {0.0, 2.0}) {
    data::LabeledSample s;
    s.smiles = v == 0.0 ? "CC" : "CCC";
    s.graph = chem::parse_smiles(s.smiles);
    s.labels = {v};
    s.mask = {1};
    ds.samples.push_back(std::move(s));
  }
  data::Normalizer n = data::Normalizer::fit(ds);
  CHECK(n.means()[0] == doctest::Approx(1.0));
  CHECK(n.stds()[0] == doctest::Approx(1.0));
  CHECK(n.apply(0.0, 0) == doctest::Approx(-1.0));
  CHECK(n.apply(2.0, 0) == doctest::Approx(1.0));
  CHECK(n.invert(n.apply(0.37, 0), 0) == doctest::Approx(0.37).epsilon(1e-12));
}

TEST_CASE("constant labels are degenerate") {
  Dataset ds;
  ds.task = regression1();
  for (int i = 0; i < 3; ++i) {
    data::LabeledSample s;
    s.smiles = "C" + std::string(i, 'C');
    s.graph = chem::parse_smiles(s.smiles);
    s.labels = {5.0};
    s.mask = {1};
    ds.samples.push_back(std::move(s));
  }
  try {
    data::Normalizer::fit(ds);
    FAIL("expected DegenerateLabels");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateLabels);
  }
}

TEST_CASE("normalizer ignores val and test rows") {
  data::SyntheticFixtureConfig cfg;
  cfg.n_labeled = 64;
  cfg.n_val = 16;
  cfg.n_test = 16;
  cfg.n_unlabeled = 0;
  cfg.seed = 5;
  data::SyntheticFixture fx = data::make_synthetic_fixture(cfg);
  data::Normalizer before = data::Normalizer::fit(fx.train);
  for (auto& s : fx.val.samples) s.labels[0] += 100.0;
  for (auto& s : fx.test.samples) s.labels[0] -= 100.0;
  data::Normalizer after = data::Normalizer::fit(fx.train);
  CHECK(before.means() == after.means());
  CHECK(before.stds() == after.stds());
}

TEST_CASE("hybrid database construction and collision policy") {
  Dataset labeled;
  labeled.task = regression1();
  for (int i = 0; i < 5; ++i) {
    data::LabeledSample s;
    s.smiles = "C" + std::string(i, 'C') + "O";
    s.graph = chem::parse_smiles(s.smiles);
    s.labels = {static_cast<double>(i)};
    s.mask = {1};
    labeled.samples.push_back(std::move(s));
  }
  {
    data::LabeledSample s;
    s.smiles = "CCCCCCO";
    s.graph = chem::parse_smiles(s.smiles);
    s.labels = {9.0};
    s.mask = {1};
    labeled.samples.push_back(std::move(s));
  }
  data::Normalizer norm = data::Normalizer::fit(labeled);

  std::vector<data::PseudoLabeledSample> pseudo;
  for (int i = 0; i < 7; ++i) {
    data::PseudoLabeledSample p;
    p.smiles = i == 0 ? "CCCCCCO" : "N" + std::string(i, 'C');
    p.pseudo_labels = {0.5};
    p.confidence = {0.8};
    p.assignment_epoch = 3;
    p.source_model_id = "gin-test";
    pseudo.push_back(std::move(p));
  }
  data::HybridDatabase db = data::build_hybrid(labeled, pseudo, norm);
  CHECK(db.size() == 12);  // 6 labeled + 6 surviving pseudo
  CHECK(db.collision_count == 1);
  CHECK(db.labeled_count() == 6);
  for (const auto& row : db.rows) {
    if (!row.observed) {
      CHECK(row.source_model_id == "gin-test");
      CHECK(row.assignment_epoch == 3);
    }
  }
}

TEST_CASE("empty pseudo set gives back the labeled set") {
  Dataset labeled;
  labeled.task = regression1();
  for (int i = 0; i < 4; ++i) {
    data::LabeledSample s;
    s.smiles = "CC" + std::string(i, 'C');
    s.graph = chem::parse_smiles(s.smiles);
    s.labels = {static_cast<double>(i)};
    s.mask = {1};
    labeled.samples.push_back(std::move(s));
  }
  data::HybridDatabase db =
      data::build_hybrid(labeled, {}, data::Normalizer::identity(1));
  CHECK(db.size() == 4);
  CHECK(db.pseudo_count() == 0);
}

TEST_CASE("hybrid jsonl round-trips bit-exactly") {
  Dataset labeled;
  labeled.task = regression1();
  data::LabeledSample s;
  s.smiles = "CCO";
  s.graph = chem::parse_smiles(s.smiles);
  s.labels = {0.123456789012345678};
  s.mask = {1};
  labeled.samples.push_back(s);
  s.smiles = "CCN";
  s.labels = {2.0};
  labeled.samples.push_back(s);
  data::Normalizer norm = data::Normalizer::fit(labeled);

  std::vector<data::PseudoLabeledSample> pseudo;
  for (int i = 0; i < 20; ++i) {
    data::PseudoLabeledSample p;
    p.smiles = "N" + std::string(i + 1, 'C');
    p.pseudo_labels = {0.1 * i - 0.7};
    p.confidence = {i / 20.0};
    p.assignment_epoch = i;
    p.source_model_id = "gin-x";
    pseudo.push_back(std::move(p));
  }
  data::HybridDatabase db = data::build_hybrid(labeled, pseudo, norm);

  const std::string path = "/tmp/ibio_test_hybrid.jsonl";
  data::export_hybrid(db, path);
  data::HybridDatabase loaded = data::import_hybrid(path);
  REQUIRE(loaded.size() == db.size());
  for (std::size_t i = 0; i < db.size(); ++i) {
    CHECK(loaded.rows[i].smiles == db.rows[i].smiles);
    CHECK(loaded.rows[i].labels == db.rows[i].labels);
    CHECK(loaded.rows[i].observed == db.rows[i].observed);
    CHECK(loaded.rows[i].confidence == db.rows[i].confidence);
  }
  const std::string path2 = "/tmp/ibio_test_hybrid2.jsonl";
  data::export_hybrid(loaded, path2);
  std::ifstream f1(path), f2(path2);
  std::string c1((std::istreambuf_iterator<char>(f1)), {});
  std::string c2((std::istreambuf_iterator<char>(f2)), {});
  CHECK(c1 == c2);
  std::remove(path.c_str());
  std::remove(path2.c_str());
}

TEST_CASE("hybrid import filters by confidence and reports corrupt rows") {
  Dataset labeled;
  labeled.task = regression1();
  data::LabeledSample s;
  s.smiles = "CCO";
  s.graph = chem::parse_smiles(s.smiles);
  s.labels = {1.0};
  s.mask = {1};
  labeled.samples.push_back(s);
  s.labels = {2.0};
  s.smiles = "OCCO";
  labeled.samples.push_back(s);

  std::vector<data::PseudoLabeledSample> pseudo;
  for (int i = 0; i < 10; ++i) {
    data::PseudoLabeledSample p;
    p.smiles = "C" + std::string(i + 1, 'C');
    p.pseudo_labels = {1.0};
    p.confidence = {i < 4 ? 0.95 : 0.5};
    p.source_model_id = "m";
    pseudo.push_back(std::move(p));
  }
  data::HybridDatabase db =
      data::build_hybrid(labeled, pseudo, data::Normalizer::fit(labeled));
  const std::string path = "/tmp/ibio_test_filter.jsonl";
  data::export_hybrid(db, path);
  data::HybridDatabase filtered = data::import_hybrid(path, 0.9);
  CHECK(filtered.labeled_count() == 2);
  CHECK(filtered.pseudo_count() == 4);
  std::remove(path.c_str());

  TempFile bad("bad.jsonl",
               "{\"smiles\":\"CC\",\"labels\":[1.0],\"is_pseudo\":false,"
               "\"confidence\":null,\"assignment_epoch\":null,"
               "\"source_model_id\":null}\n"
               "{\"smiles\":\"CCC\",\"labels\":[1.0],\"is_pseudo\":false,"
               "\"confidence\":null,\"assignment_epoch\":null,"
               "\"source_model_id\":null}\n"
               "{oops\n");
  try {
    data::import_hybrid(bad.path);
    FAIL("expected CorruptRow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kCorruptRow);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("synthetic fixture is deterministic with disjoint pools") {
  data::SyntheticFixtureConfig cfg;
  cfg.n_labeled = 30;
  cfg.n_val = 10;
  cfg.n_test = 20;
  cfg.n_unlabeled = 50;
  cfg.seed = 77;
  data::SyntheticFixture a = data::make_synthetic_fixture(cfg);
  data::SyntheticFixture b = data::make_synthetic_fixture(cfg);
  REQUIRE(a.train.size() == 30);
  REQUIRE(a.pool.size() == 50);
  for (std::size_t i = 0; i < a.train.size(); ++i) {
    CHECK(a.train.samples[i].smiles == b.train.samples[i].smiles);
    CHECK(a.train.samples[i].labels == b.train.samples[i].labels);
  }
  std::set<std::string> seen;
  for (const auto& s : a.train.samples) CHECK(seen.insert(s.smiles).second);
  for (const auto& s : a.val.samples) CHECK(seen.insert(s.smiles).second);
  for (const auto& s : a.test.samples) CHECK(seen.insert(s.smiles).second);
  for (const auto& s : a.pool.smiles) CHECK(seen.insert(s).second);
  for (const auto& s : a.pool.smiles) CHECK(a.oracle.count(s) == 1);
}
