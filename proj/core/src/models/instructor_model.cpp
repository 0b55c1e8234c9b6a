// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include "ibio/models/instructor_model.hpp"

#include "ibio/common/error.hpp"
#include "ibio/tensor/ops.hpp"

namespace ibio::models {

namespace op = tk::ops;

void InstructorConfig::validate() const {
  if (embedding_dim < 1 || n_tasks < 1 || hidden < 1) {
    raise(ErrorCode::kConfigError, "instructor dims must be positive");
  }
}

InstructorModel InstructorModel::init(const InstructorConfig& cfg,
                                      std::uint64_t seed) {
  cfg.validate();
  InstructorModel m;
  m.cfg_ = cfg;
  tk::SeededRng rng(seed);
  const auto in = static_cast<std::size_t>(cfg.input_dim());
  const auto H = static_cast<std::size_t>(cfg.hidden);
  m.params_.add_kaiming("g/fc0/W", in, {in, H}, rng);
  m.params_.add_zeros("g/fc0/b", {H});
  m.params_.add_kaiming("g/fc1/W", H, {H, H}, rng);
  m.params_.add_zeros("g/fc1/b", {H});
  // Zero-initialized output layer: untrained g scores p = 0.5 for any input.
  m.params_.add_zeros("g/out/W", {H, 1});
  m.params_.add_zeros("g/out/b", {1});
  return m;
}

InstructorForward InstructorModel::forward(tk::Tape& tape, tk::ParamBinding& P,
                                           const tk::Tensor& inputs) {
  if (inputs.rank() != 2 ||
      inputs.cols() != static_cast<std::size_t>(cfg_.input_dim())) {
    raise(ErrorCode::kShapeMismatch,
          "instructor input " + inputs.shape_str() + ", expected cols " +
              std::to_string(cfg_.input_dim()));
  }
  tk::Var x = tape.constant(inputs);
  tk::Var h0 = op::relu(op::add_rowvec(op::matmul(x, P["g/fc0/W"]), P["g/fc0/b"]));
  tk::Var h1 = op::relu(op::add_rowvec(op::matmul(h0, P["g/fc1/W"]), P["g/fc1/b"]));
  tk::Var logit = op::add_rowvec(op::matmul(h1, P["g/out/W"]), P["g/out/b"]);
  return InstructorForward{logit, op::sigmoid(logit)};
}

tk::Tensor instructor_inputs(const tk::Tensor& graph_embeddings,
                             const tk::Tensor& label_values,
                             const tk::Tensor& per_sample_loss) {
  const std::size_t n = graph_embeddings.rows();
  if (label_values.rows() != n || per_sample_loss.rows() != n ||
      per_sample_loss.cols() != 1) {
    raise(ErrorCode::kShapeMismatch, "instructor input row counts differ");
  }
  const std::size_t d = graph_embeddings.cols() + label_values.cols() + 1;
  tk::Tensor out({n, d});
  for (std::size_t i = 0; i < n; ++i) {
    double* row = out.data() + i * d;
    const double* e = graph_embeddings.data() + i * graph_embeddings.cols();
    for (std::size_t j = 0; j < graph_embeddings.cols(); ++j) row[j] = e[j];
    const double* lv = label_values.data() + i * label_values.cols();
    for (std::size_t j = 0; j < label_values.cols(); ++j)
      row[graph_embeddings.cols() + j] = lv[j];
    row[d - 1] = per_sample_loss[i];
  }
  return out;
}

}  // namespace ibio::models
