// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "ibio/tensor/adam.hpp"
#include "ibio/tensor/grad_check.hpp"
#include "ibio/tensor/ops.hpp"
#include "ibio/tensor/param_store.hpp"

using namespace ibio;
namespace op = tk::ops;

TEST_CASE("matmul against identity") {
  tk::Tape tape;
  tk::Var a = tape.constant(tk::Tensor({2, 2}, {1, 2, 3, 4}));
  tk::Var eye = tape.constant(tk::Tensor({2, 2}, {1, 0, 0, 1}));
  tk::Var c = op::matmul(a, eye);
  CHECK(tape.value(c).values() == std::vector<double>{1, 2, 3, 4});
}

TEST_CASE("matmul shape mismatch names both shapes") {
  tk::Tape tape;
  tk::Var a = tape.constant(tk::Tensor({2, 3}));
  tk::Var b = tape.constant(tk::Tensor({2, 3}));
  try {
    op::matmul(a, b);
    FAIL("expected ShapeMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kShapeMismatch);
    CHECK(std::string(e.what()).find("[2,3]") != std::string::npos);
  }
}

TEST_CASE("sigmoid at zero") {
  tk::Tape tape;
  tk::Var x = tape.constant(tk::Tensor::scalar(0.0));
  CHECK(tape.value(op::sigmoid(x)).item() == doctest::Approx(0.5));
}

TEST_CASE("segment_sum basic") {
  tk::Tape tape;
  tk::Var v = tape.constant(tk::Tensor({3, 1}, {1, 2, 3}));
  tk::Var s = op::segment_sum(v, {0, 0, 1}, 2);
  CHECK(tape.value(s).values() == std::vector<double>{3, 3});
}

TEST_CASE("backward of x*x at 3 is 6") {
  tk::Tape tape;
  tk::Var x = tape.leaf(tk::Tensor::scalar(3.0));
  tk::Var y = op::mul(x, x);
  tape.backward(y);
  CHECK(tape.grad(x)[0] == doctest::Approx(6.0));
}

TEST_CASE("backward of sigmoid at 0 is 0.25") {
  tk::Tape tape;
  tk::Var x = tape.leaf(tk::Tensor::scalar(0.0));
  tk::Var y = op::sigmoid(x);
  tape.backward(y);
  CHECK(tape.grad(x)[0] == doctest::Approx(0.25));
}

TEST_CASE("backward rejects non-scalar loss") {
  tk::Tape tape;
  tk::Var x = tape.leaf(tk::Tensor({2}, {1, 2}));
  CHECK_THROWS_AS(tape.backward(x), Error);
}

TEST_CASE("backward does not mutate forward values") {
  tk::Tape tape;
  tk::Var x = tape.leaf(tk::Tensor({2, 2}, {1, -2, 3, -4}));
  tk::Var y = op::relu(x);
  const std::vector<double> before = tape.value(y).values();
  tape.backward(op::sum_all(y));
  CHECK(tape.value(y).values() == before);
  CHECK(tape.value(x).values() == std::vector<double>{1, -2, 3, -4});
}

TEST_CASE("three-layer MLP gradients match finite differences") {
  tk::SeededRng rng(42);
  tk::ParamStore params;
  params.add_kaiming("w0", 4, {4, 8}, rng);
  params.add_zeros("b0", {8});
  params.add_kaiming("w1", 8, {8, 8}, rng);
  params.add_zeros("b1", {8});
  params.add_kaiming("w2", 8, {8, 2}, rng);
  params.add_zeros("b2", {2});

  tk::Tensor x({5, 4});
  tk::Tensor y({5, 2});
  tk::RngStream s = rng.stream("data");
  for (auto& v : x.values()) v = s.uniform(-1, 1);
  for (auto& v : y.values()) v = s.uniform(-1, 1);

  auto forward = [&](tk::Tape& tape, tk::ParamBinding& P) {
    tk::Var h = tape.constant(x);
    h = op::tanh_op(op::add_rowvec(op::matmul(h, P["w0"]), P["b0"]));
    h = op::relu(op::add_rowvec(op::matmul(h, P["w1"]), P["b1"]));
    h = op::add_rowvec(op::matmul(h, P["w2"]), P["b2"]);
    return op::mean_all(op::mse_elems(h, y));
  };
  auto loss_of = [&](tk::ParamStore& ps) {
    tk::Tape tape;
    tk::ParamBinding P(tape, ps);
    return tape.value(forward(tape, P)).item();
  };
  auto grads_of = [&](tk::ParamStore& ps) {
    tk::Tape tape;
    tk::ParamBinding P(tape, ps);
    tape.backward(forward(tape, P));
    return P.grads();
  };
  tk::GradCheckReport rep = tk::grad_check(loss_of, grads_of, params, 1e-5, 1e-4);
  CHECK(rep.all_ok);
  CHECK(rep.worst_rel_err < 1e-4);
}

TEST_CASE("gradients of every op kind survive finite differences") {
  tk::SeededRng rng(7);
  tk::ParamStore params;
  params.add_kaiming("a", 6, {4, 6}, rng);
  params.add_kaiming("col", 1, {4, 1}, rng);
  params.add_kaiming("eps", 1, {1}, rng);

  tk::Tensor targets({2, 12});
  tk::RngStream ts = rng.stream("t");
  for (auto& v : targets.values()) v = ts.uniform(0.1, 0.9);

  auto forward = [&](tk::Tape& tape, tk::ParamBinding& P) {
    tk::Var a = P["a"];
    tk::Var b = op::mul_colvec(op::exp_op(op::scale(a, 0.3)), P["col"]);
    tk::Var c = op::scale_by_param(op::tanh_op(b), P["eps"]);
    tk::Var d = op::segment_mean(c, {0, 0, 1, 1}, 2);
    tk::Var e = op::concat_cols({d, op::square(d)});
    tk::Var f = op::index_gather(e, {1, 0});
    tk::Var g = op::softmax_rows(f);
    tk::Var h = op::div(op::add_scalar(g, 1.0), op::add_scalar(g, 2.0));
    tk::Var l1 = op::bce_with_logits(
        op::reshape(op::sum_axis(h, 1), {2, 1}),
        tk::Tensor({2, 1}, {1.0, 0.0}));
    tk::Var l2 = op::mae_elems(op::log_op(op::add_scalar(g, 0.5)),
                               tk::Tensor({2, 12}, targets.values()));
    return op::add(op::mean_all(l1), op::mean_all(l2));
  };
  auto loss_of = [&](tk::ParamStore& ps) {
    tk::Tape tape;
    tk::ParamBinding P(tape, ps);
    return tape.value(forward(tape, P)).item();
  };
  auto grads_of = [&](tk::ParamStore& ps) {
    tk::Tape tape;
    tk::ParamBinding P(tape, ps);
    tape.backward(forward(tape, P));
    return P.grads();
  };
  tk::GradCheckReport rep = tk::grad_check(loss_of, grads_of, params, 1e-6, 2e-4);
  CHECK(rep.all_ok);
}

TEST_CASE("adam single step closed form") {
  tk::AdamConfig cfg;
  cfg.lr = 0.1;
  cfg.weight_decay = 0.0;
  tk::Tensor p({1}, {1.0});
  tk::Tensor g({1}, {1.0});
  tk::AdamState st{tk::Tensor::zeros({1}), tk::Tensor::zeros({1}), 0};
  tk::adam_step(p, g, st, cfg);
  // m_hat = v_hat = 1 after bias correction; delta = -lr / (1 + eps).
  CHECK(p[0] == doctest::Approx(1.0 - 0.1 / (1.0 + cfg.eps)).epsilon(1e-12));
}

TEST_CASE("adam zero gradient leaves parameters unchanged without decay") {
  tk::AdamConfig cfg;
  cfg.weight_decay = 0.0;
  tk::Tensor p({2}, {0.7, -0.3});
  tk::Tensor g({2}, {0.0, 0.0});
  tk::AdamState st{tk::Tensor::zeros({2}), tk::Tensor::zeros({2}), 0};
  tk::adam_step(p, g, st, cfg);
  CHECK(p[0] == 0.7);
  CHECK(p[1] == -0.3);
}

TEST_CASE("adam decoupled weight decay with zero gradient") {
  tk::AdamConfig cfg;
  cfg.lr = 0.5;
  cfg.weight_decay = 1e-16;
  tk::Tensor p({1}, {2.0});
  tk::Tensor g({1}, {0.0});
  tk::AdamState st{tk::Tensor::zeros({1}), tk::Tensor::zeros({1}), 0};
  tk::adam_step(p, g, st, cfg);
  CHECK(p[0] == 2.0 - 0.5 * 1e-16 * 2.0);
}

TEST_CASE("dropout eval mode is the identity") {
  tk::Tape tape;
  tk::Var x = tape.constant(tk::Tensor({4}, {1, 2, 3, 4}));
  tk::SeededRng rng(1);
  tk::Var y = op::dropout(x, 0.4, rng.stream("d"), false);
  CHECK(y.id == x.id);
}

TEST_CASE("dropout train mode preserves the mean statistically") {
  const std::size_t n = 100000;
  tk::Tensor big({n});
  for (auto& v : big.values()) v = 1.0;
  tk::Tape tape;
  tk::Var x = tape.constant(big);
  tk::SeededRng rng(99);
  tk::Var y = op::dropout(x, 0.3, rng.stream("dropout"), true);
  double mean = 0.0;
  for (double v : tape.value(y).values()) mean += v;
  mean /= static_cast<double>(n);
  CHECK(mean == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("dropout rate bounds") {
  tk::Tape tape;
  tk::Var x = tape.constant(tk::Tensor({2}, {1, 2}));
  tk::SeededRng rng(1);
  CHECK_THROWS_AS(op::dropout(x, 1.0, rng.stream("d"), true), Error);
  CHECK_THROWS_AS(op::dropout(x, -0.1, rng.stream("d"), true), Error);
}

TEST_CASE("segment_mean is invariant to within-segment order") {
  tk::Tensor a({4, 2}, {1, 2, 3, 4, 5, 6, 7, 8});
  tk::Tensor b({4, 2}, {3, 4, 1, 2, 7, 8, 5, 6});  // swapped within segments
  tk::Tape ta, tb;
  tk::Var ra = op::segment_mean(ta.constant(a), {0, 0, 1, 1}, 2);
  tk::Var rb = op::segment_mean(tb.constant(b), {0, 0, 1, 1}, 2);
  CHECK(ta.value(ra).values() == tb.value(rb).values());
}

TEST_CASE("seeded rng streams are reproducible and independent") {
  tk::SeededRng rng(123);
  tk::RngStream a1 = rng.stream("alpha", 5, 2);
  tk::RngStream a2 = rng.stream("alpha", 5, 2);
  tk::RngStream b = rng.stream("beta", 5, 2);
  for (int i = 0; i < 16; ++i) {
    CHECK(a1.next_u64() == a2.at(static_cast<std::uint64_t>(i)));
  }
  CHECK(b.next_u64() != rng.stream("alpha", 5, 2).next_u64());
}

TEST_CASE("rng normal moments") {
  tk::SeededRng rng(7);
  tk::RngStream s = rng.stream("normal");
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = s.next_normal();
    sum += x;
    sq += x * x;
  }
  CHECK(std::fabs(sum / n) < 0.01);
  CHECK(sq / n == doctest::Approx(1.0).epsilon(0.02));
}
