// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "ibio/tensor/rng.hpp"
#include "ibio/tensor/tape.hpp"

namespace ibio::tk::ops {

// Elementwise binary (same shape).
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var div(Var a, Var b);

// Broadcast: [n,d] plus a rank-1 [d] bias row.
Var add_rowvec(Var m, Var row);

// Broadcast multiplies: a [n,d] matrix by a learnable scalar ([1] tensor) or
// by a [n,1] column.
Var scale_by_param(Var a, Var scalar_param);
Var mul_colvec(Var m, Var col);

// Elementwise with compile-time constants.
Var scale(Var a, double c);
Var add_scalar(Var a, double c);
Var neg(Var a);
Var mul_const(Var a, const Tensor& c);

// Elementwise unary.
Var relu(Var a);
Var sigmoid(Var a);
Var tanh_op(Var a);
Var exp_op(Var a);
Var log_op(Var a);
Var square(Var a);
Var abs_op(Var a);

// Linear algebra and shape.
Var matmul(Var a, Var b);
Var reshape(Var a, std::vector<std::size_t> shape);
Var concat_cols(const std::vector<Var>& parts);
Var index_gather(Var a, std::vector<int> rows);

// Reductions.
Var sum_all(Var a);
Var mean_all(Var a);
Var sum_axis(Var a, int axis);
Var mean_axis(Var a, int axis);

// Segment reductions over sorted segment ids (message passing / readout).
Var segment_sum(Var a, std::vector<int> segments, int n_segments);
Var segment_mean(Var a, std::vector<int> segments, int n_segments);

// Row-wise softmax, and softmax within segments of a rank-1 score vector.
Var softmax_rows(Var a);
Var segment_softmax(Var scores, std::vector<int> segments, int n_segments);

/// Inverted dropout: survivors scaled by 1/(1-rate). Identity when train is
/// false or rate is 0. Mask element i is a pure function of (stream key, i).
Var dropout(Var a, double rate, RngStream stream, bool train);

// Losses, per-element; reduce with sum/mean/mul_const as needed.
Var bce_with_logits(Var logits, const Tensor& targets);
Var mse_elems(Var preds, const Tensor& targets);
Var mae_elems(Var preds, const Tensor& targets);

}  // namespace ibio::tk::ops
