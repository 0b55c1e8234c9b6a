// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "ibio/tensor/ops.hpp"
#include "ibio/tensor/param_store.hpp"

using namespace ibio;
namespace op = tk::ops;

static void BM_MatmulForward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  tk::SeededRng rng(3);
  tk::RngStream s = rng.stream("m");
  tk::Tensor a({n, n}), b({n, n});
  for (auto& v : a.values()) v = s.uniform(-1, 1);
  for (auto& v : b.values()) v = s.uniform(-1, 1);
  for (auto _ : state) {
    tk::Tape tape;
    benchmark::DoNotOptimize(
        tape.value(op::matmul(tape.constant(a), tape.constant(b))));
  }
  state.SetItemsProcessed(state.iterations() * 2 * n * n * n);
}
BENCHMARK(BM_MatmulForward)->Arg(64)->Arg(128)->Arg(256);

static void BM_MlpForwardBackward(benchmark::State& state) {
  const std::size_t rows = 512, hidden = 64;
  tk::SeededRng rng(4);
  tk::ParamStore params;
  params.add_kaiming("w0", 32, {32, hidden}, rng);
  params.add_zeros("b0", {hidden});
  params.add_kaiming("w1", hidden, {hidden, 1}, rng);
  params.add_zeros("b1", {1});
  tk::Tensor x({rows, 32});
  tk::Tensor y({rows, 1});
  tk::RngStream s = rng.stream("x");
  for (auto& v : x.values()) v = s.uniform(-1, 1);
  for (auto& v : y.values()) v = s.uniform(-1, 1);

  for (auto _ : state) {
    tk::Tape tape;
    tk::ParamBinding P(tape, params);
    tk::Var h = op::relu(op::add_rowvec(op::matmul(tape.constant(x), P["w0"]), P["b0"]));
    tk::Var out = op::add_rowvec(op::matmul(h, P["w1"]), P["b1"]);
    tk::Var loss = op::mean_all(op::mse_elems(out, y));
    tape.backward(loss);
    benchmark::DoNotOptimize(tape.grad(P["w0"]));
  }
  state.SetItemsProcessed(state.iterations() * rows);
}
BENCHMARK(BM_MlpForwardBackward);
