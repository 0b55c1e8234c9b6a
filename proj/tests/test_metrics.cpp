// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "ibio/common/error.hpp"
#include "ibio/metrics/metrics.hpp"
#include "ibio/tensor/rng.hpp"
#include "ibio/verify/oracles.hpp"

using namespace ibio;

TEST_CASE("perfect separation scores 1") {
  CHECK(metrics::roc_auc({0.9, 0.8, 0.2, 0.1}, {1, 1, 0, 0}) == 1.0);
}

TEST_CASE("all ties score one half") {
  CHECK(metrics::roc_auc({0.4, 0.4, 0.4, 0.4}, {1, 0, 1, 0}) == 0.5);
}

TEST_CASE("hand case equals the pair count") {
  const std::vector<double> s{0.7, 0.4, 0.6, 0.1};
  const std::vector<int> y{1, 0, 1, 0};
  CHECK(metrics::roc_auc(s, y) == 1.0);
  CHECK(verify::pair_count_auc(s, y) == 1.0);
}

TEST_CASE("single class raises") {
  try {
    metrics::roc_auc({0.1, 0.2}, {1, 1});
    FAIL("expected SingleClass");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSingleClass);
  }
}

TEST_CASE("rank auc equals the quadratic oracle on 1000 random instances") {
  tk::SeededRng rng(91);
  for (int trial = 0; trial < 1000; ++trial) {
    tk::RngStream s = rng.stream("trial", trial);
    const int n = 2 + static_cast<int>(s.next_below(199));
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) {
      scores[i] = std::floor(s.uniform(0.0, 16.0)) / 16.0;  // frequent ties
      labels[i] = s.next_double() < 0.4 ? 1 : 0;
    }
    labels[0] = 1;
    labels[n - 1] = 0;
    CHECK(metrics::roc_auc(scores, labels) ==
          verify::pair_count_auc(scores, labels));
  }
}

TEST_CASE("auc is invariant under strictly monotone transforms") {
  tk::SeededRng rng(92);
  for (int trial = 0; trial < 50; ++trial) {
    tk::RngStream s = rng.stream("mono", trial);
    const int n = 30;
    std::vector<double> scores(n), mapped(n);
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) {
      scores[i] = s.uniform(-3.0, 3.0);
      labels[i] = s.next_double() < 0.5 ? 1 : 0;
    }
    labels[0] = 1;
    labels[1] = 0;
    const double a = s.uniform(0.5, 2.0);
    for (int i = 0; i < n; ++i) {
      mapped[i] = std::exp(a * scores[i]) + 0.1 * scores[i];
    }
    CHECK(metrics::roc_auc(scores, labels) ==
          doctest::Approx(metrics::roc_auc(mapped, labels)).epsilon(1e-12));
  }
}

TEST_CASE("auc of negated scores complements to one without ties") {
  tk::SeededRng rng(93);
  tk::RngStream s = rng.stream("neg");
  const int n = 101;
  std::vector<double> scores(n);
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) {
    scores[i] = s.uniform(0.0, 1.0) + i * 1e-9;  // distinct
    labels[i] = s.next_double() < 0.5 ? 1 : 0;
  }
  labels[0] = 1;
  labels[1] = 0;
  std::vector<double> negated(n);
  for (int i = 0; i < n; ++i) negated[i] = -scores[i];
  CHECK(metrics::roc_auc(scores, labels) + metrics::roc_auc(negated, labels) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rmse and mae hand cases") {
  CHECK(metrics::rmse({1, 2, 3}, {1, 2, 3}, {1, 1, 1}) == 0.0);
  CHECK(metrics::rmse({0, 0}, {3, 4}, {1, 1}) ==
        doctest::Approx(std::sqrt(12.5)).epsilon(1e-12));
  CHECK(metrics::rmse({0, 99}, {0, 5}, {1, 0}) == 0.0);
  CHECK(metrics::mae({0, 0}, {3, -4}, {1, 1}) == doctest::Approx(3.5));
}

TEST_CASE("all-masked raises") {
  try {
    metrics::rmse({1.0}, {2.0}, {0});
    FAIL("expected AllMasked");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kAllMasked);
  }
}

TEST_CASE("rmse dominates mae") {
  tk::SeededRng rng(94);
  for (int trial = 0; trial < 100; ++trial) {
    tk::RngStream s = rng.stream("dom", trial);
    const int n = 2 + static_cast<int>(s.next_below(40));
    std::vector<double> p(n), y(n);
    std::vector<std::uint8_t> m(n, 1);
    for (int i = 0; i < n; ++i) {
      p[i] = s.uniform(-5, 5);
      y[i] = s.uniform(-5, 5);
    }
    const double r = metrics::rmse(p, y, m);
    const double a = metrics::mae(p, y, m);
    CHECK(r >= a);
    CHECK(a >= 0.0);
  }
}

TEST_CASE("multitask aggregation averages valid tasks and lists exclusions") {
  std::vector<metrics::TaskScore> scores(2);
  scores[0].task = 0;
  scores[0].value = 0.8;
  scores[1].task = 1;
  scores[1].value = 0.6;
  metrics::MetricReport r = metrics::aggregate_multitask("roc_auc", scores);
  CHECK(r.aggregate == doctest::Approx(0.7));
  CHECK(r.valid_tasks == 2);

  scores[1].valid = false;
  r = metrics::aggregate_multitask("roc_auc", scores);
  CHECK(r.aggregate == doctest::Approx(0.8));
  CHECK(r.excluded_tasks == std::vector<int>{1});

  std::vector<metrics::TaskScore> twelve(12);
  for (int t = 0; t < 12; ++t) {
    twelve[t].task = t;
    twelve[t].value = 0.77;
  }
  r = metrics::aggregate_multitask("roc_auc", twelve);
  CHECK(r.aggregate == doctest::Approx(0.77));

  scores[0].valid = false;
  try {
    metrics::aggregate_multitask("roc_auc", scores);
    FAIL("expected NoValidTask");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNoValidTask);
  }
}
