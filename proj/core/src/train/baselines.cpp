// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include "ibio/train/baselines.hpp"

#include <algorithm>
#include <numeric>

#include "ibio/chem/fingerprint.hpp"
#include "ibio/common/error.hpp"

namespace ibio::train {

KnnPrediction knn_predict(const data::Dataset& train,
                          const chem::MolGraph& query, const KnnConfig& cfg) {
  if (train.empty()) raise(ErrorCode::kEmptyTrain, "knn needs training rows");
  const chem::FingerprintBits qfp =
      chem::circular_fingerprint(query, cfg.fp_radius, cfg.fp_bits);

  std::vector<std::pair<double, std::size_t>> sims;
  sims.reserve(train.size());
  for (std::size_t i = 0; i < train.samples.size(); ++i) {
    const chem::FingerprintBits fp = chem::circular_fingerprint(
        train.samples[i].graph, cfg.fp_radius, cfg.fp_bits);
    sims.emplace_back(chem::tanimoto(qfp, fp), i);
  }
  const std::size_t k =
      std::min<std::size_t>(cfg.k_neighbors, sims.size());
  std::partial_sort(sims.begin(), sims.begin() + k, sims.end(),
                    [](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first > b.first;
                      return a.second < b.second;
                    });

  const int T = train.task.n_tasks;
  KnnPrediction out;
  out.values.assign(T, 0.0);
  std::vector<int> counts(T, 0);
  for (std::size_t n = 0; n < k; ++n) {
    const data::LabeledSample& s = train.samples[sims[n].second];
    for (int t = 0; t < T; ++t) {
      if (!s.mask[t]) continue;
      out.values[t] += s.labels[t];
      ++counts[t];
    }
  }
  for (int t = 0; t < T; ++t) {
    out.values[t] = counts[t] > 0 ? out.values[t] / counts[t] : 0.0;
  }
  return out;
}

metrics::MetricReport run_baseline_knn_fingerprint(const data::Dataset& train,
                                                   const data::Dataset& test,
                                                   const KnnConfig& cfg) {
  if (train.empty()) raise(ErrorCode::kEmptyTrain, "knn needs training rows");
  const int T = train.task.n_tasks;
  std::vector<std::vector<double>> preds(test.size());
  for (std::size_t i = 0; i < test.samples.size(); ++i) {
    preds[i] = knn_predict(train, test.samples[i].graph, cfg).values;
  }

  std::vector<metrics::TaskScore> scores;
  for (int t = 0; t < T; ++t) {
    metrics::TaskScore ts;
    ts.task = t;
    if (train.task.is_classification()) {
      std::vector<double> s;
      std::vector<int> y;
      for (std::size_t i = 0; i < test.samples.size(); ++i) {
        if (!test.samples[i].mask[t]) continue;
        s.push_back(preds[i][t]);
        y.push_back(test.samples[i].labels[t] > 0.5 ? 1 : 0);
      }
      try {
        ts.value = metrics::roc_auc(s, y);
        ts.evaluated_count = static_cast<long>(s.size());
      } catch (const Error& e) {
        ts.valid = false;
        ts.note = e.what();
      }
    } else {
      std::vector<double> p, y;
      std::vector<std::uint8_t> m;
      for (std::size_t i = 0; i < test.samples.size(); ++i) {
        p.push_back(preds[i][t]);
        y.push_back(test.samples[i].labels[t]);
        m.push_back(test.samples[i].mask[t]);
      }
      try {
        ts.value = metrics::rmse(p, y, m);
        ts.evaluated_count = static_cast<long>(std::count(m.begin(), m.end(), 1));
      } catch (const Error& e) {
        ts.valid = false;
        ts.note = e.what();
      }
    }
    scores.push_back(std::move(ts));
  }
  return metrics::aggregate_multitask(
      train.task.is_classification() ? "roc_auc" : "rmse", std::move(scores));
}

}  // namespace ibio::train
