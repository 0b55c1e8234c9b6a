// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ibio/data/dataset.hpp"
#include "ibio/metrics/metrics.hpp"

namespace ibio::train {

struct KnnConfig {
  int k_neighbors = 5;
  int fp_radius = 2;
  int fp_bits = 2048;
};

struct KnnPrediction {
  std::vector<double> values;  // mean neighbor label per task
};

/// Descriptor-based baseline: prediction is the mean (regression) or majority
/// probability (classification) of the labels of the k nearest training
/// molecules by Tanimoto similarity on circular fingerprints. Ties in
/// similarity break on the lower training index.
KnnPrediction knn_predict(const data::Dataset& train,
                          const chem::MolGraph& query, const KnnConfig& cfg);

/// Full evaluation: ROC-AUC for classification (mean-label scores) or RMSE
/// for regression on the test split.
metrics::MetricReport run_baseline_knn_fingerprint(const data::Dataset& train,
                                                   const data::Dataset& test,
                                                   const KnnConfig& cfg);

}  // namespace ibio::train
