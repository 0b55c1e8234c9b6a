// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include "ibio/tensor/ops.hpp"

#include <cmath>
#include <cstring>
#include <memory>
#include <utility>

namespace ibio::tk::ops {

namespace {

void require_same_tape(Var a, Var b, const char* op) {
  if (a.tape != b.tape) {
    raise(ErrorCode::kConfigError, std::string(op) + ": vars on different tapes");
  }
}

#ifndef NDEBUG
void debug_check_finite(const Tensor& t, const char* op) {
  for (double v : t.values()) {
    if (!std::isfinite(v)) {
      raise(ErrorCode::kNonFiniteLoss,
            std::string("non-finite value produced by ") + op);
    }
  }
}
#define IBIO_CHECK_FINITE(t, op) debug_check_finite((t), (op))
#else
#define IBIO_CHECK_FINITE(t, op) (void)0
#endif

// Generic elementwise binary with per-element partials.
template <typename Fwd, typename Bwd>
Var ew_binary(Var a, Var b, const char* name, Fwd fwd, Bwd bwd) {
  require_same_tape(a, b, name);
  Tape& t = *a.tape;
  require_same_shape(t.value(a), t.value(b), name);
  const Tensor& va = t.value(a);
  const Tensor& vb = t.value(b);
  Tensor out(va.shape());
  for (std::size_t i = 0; i < out.size(); ++i) fwd(va[i], vb[i], out[i]);
  const bool needs = t.requires_grad(a.id) || t.requires_grad(b.id);
  if (!needs) return t.make_node(std::move(out), false);
  const int ia = a.id, ib = b.id;
  return t.make_node(std::move(out), true, [ia, ib, bwd](Tape& tp, int self) {
    const Tensor& g = tp.ensure_grad(self);
    const Tensor& va = tp.value(Var{&tp, ia});
    const Tensor& vb = tp.value(Var{&tp, ib});
    const Tensor& y = tp.value(Var{&tp, self});
    const bool na = tp.requires_grad(ia);
    const bool nb = tp.requires_grad(ib);
    Tensor* ga = na ? &tp.ensure_grad(ia) : nullptr;
    Tensor* gb = nb ? &tp.ensure_grad(ib) : nullptr;
    for (std::size_t i = 0; i < g.size(); ++i) {
      double da = 0.0, db = 0.0;
      bwd(va[i], vb[i], y[i], da, db);
      if (ga) (*ga)[i] += g[i] * da;
      if (gb) (*gb)[i] += g[i] * db;
    }
  });
}

// Generic elementwise unary; partial receives (x, y).
template <typename Fwd, typename Bwd>
Var ew_unary(Var a, const char* name, Fwd fwd, Bwd bwd, bool check = true) {
  Tape& t = *a.tape;
  const Tensor& va = t.value(a);
  Tensor out(va.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fwd(va[i]);
  if (check) IBIO_CHECK_FINITE(out, name);
  if (!t.requires_grad(a.id)) return t.make_node(std::move(out), false);
  const int ia = a.id;
  return t.make_node(std::move(out), true, [ia, bwd](Tape& tp, int self) {
    const Tensor& g = tp.ensure_grad(self);
    const Tensor& x = tp.value(Var{&tp, ia});
    const Tensor& y = tp.value(Var{&tp, self});
    Tensor& ga = tp.ensure_grad(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * bwd(x[i], y[i]);
  });
}

}  // namespace

Var add(Var a, Var b) {
  return ew_binary(
      a, b, "add", [](double x, double y, double& o) { o = x + y; },
      [](double, double, double, double& da, double& db) {
        da = 1.0;
        db = 1.0;
      });
}

Var sub(Var a, Var b) {
  return ew_binary(
      a, b, "sub", [](double x, double y, double& o) { o = x - y; },
      [](double, double, double, double& da, double& db) {
        da = 1.0;
        db = -1.0;
      });
}

Var mul(Var a, Var b) {
  return ew_binary(
      a, b, "mul", [](double x, double y, double& o) { o = x * y; },
      [](double x, double y, double, double& da, double& db) {
        da = y;
        db = x;
      });
}

Var div(Var a, Var b) {
  return ew_binary(
      a, b, "div", [](double x, double y, double& o) { o = x / y; },
      [](double x, double y, double, double& da, double& db) {
        da = 1.0 / y;
        db = -x / (y * y);
      });
}

Var add_rowvec(Var m, Var row) {
  require_same_tape(m, row, "add_rowvec");
  Tape& t = *m.tape;
  const Tensor& vm = t.value(m);
  const Tensor& vr = t.value(row);
  if (vm.rank() != 2 || vr.rank() != 1 || vr.size() != vm.cols()) {
    raise(ErrorCode::kShapeMismatch,
          "add_rowvec: " + vm.shape_str() + " vs " + vr.shape_str());
  }
  const std::size_t n = vm.rows(), d = vm.cols();
  Tensor out({n, d});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) out.at(i, j) = vm.at(i, j) + vr[j];
  if (!t.requires_grad(m.id) && !t.requires_grad(row.id)) {
    return t.make_node(std::move(out), false);
  }
  const int im = m.id, ir = row.id;
  return t.make_node(std::move(out), true, [im, ir](Tape& tp, int self) {
    const Tensor& g = tp.ensure_grad(self);
    const std::size_t n = g.rows(), d = g.cols();
    if (tp.requires_grad(im)) {
      Tensor& gm = tp.ensure_grad(im);
      for (std::size_t i = 0; i < g.size(); ++i) gm[i] += g[i];
    }
    if (tp.requires_grad(ir)) {
      Tensor& gr = tp.ensure_grad(ir);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) gr[j] += g.at(i, j);
    }
  });
}

Var scale_by_param(Var a, Var scalar_param) {
  require_same_tape(a, scalar_param, "scale_by_param");
  Tape& t = *a.tape;
  const Tensor& va = t.value(a);
  const Tensor& vs = t.value(scalar_param);
  if (vs.size() != 1) {
    raise(ErrorCode::kShapeMismatch, "scale_by_param: " + vs.shape_str());
  }
  const double s = vs[0];
  Tensor out(va.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = va[i] * s;
  if (!t.requires_grad(a.id) && !t.requires_grad(scalar_param.id)) {
    return t.make_node(std::move(out), false);
  }
  const int ia = a.id, is = scalar_param.id;
  return t.make_node(std::move(out), true, [ia, is](Tape& tp, int self) {
    const Tensor& g = tp.ensure_grad(self);
    const Tensor& va = tp.value(Var{&tp, ia});
    const double s = tp.value(Var{&tp, is})[0];
    if (tp.requires_grad(ia)) {
      Tensor& ga = tp.ensure_grad(ia);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * s;
    }
    if (tp.requires_grad(is)) {
      Tensor& gs = tp.ensure_grad(is);
      double acc = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) acc += g[i] * va[i];
      gs[0] += acc;
    }
  });
}

Var mul_colvec(Var m, Var col) {
  require_same_tape(m, col, "mul_colvec");
  Tape& t = *m.tape;
  const Tensor& vm = t.value(m);
  const Tensor& vc = t.value(col);
  if (vm.rank() != 2 || vc.rank() != 2 || vc.cols() != 1 ||
      vc.rows() != vm.rows()) {
    raise(ErrorCode::kShapeMismatch,
          "mul_colvec: " + vm.shape_str() + " vs " + vc.shape_str());
  }
  const std::size_t n = vm.rows(), d = vm.cols();
  Tensor out({n, d});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) out.at(i, j) = vm.at(i, j) * vc[i];
  if (!t.requires_grad(m.id) && !t.requires_grad(col.id)) {
    return t.make_node(std::move(out), false);
  }
  const int im = m.id, ic = col.id;
  return t.make_node(std::move(out), true, [im, ic](Tape& tp, int self) {
    const Tensor& g = tp.ensure_grad(self);
    const Tensor& vm = tp.value(Var{&tp, im});
    const Tensor& vc = tp.value(Var{&tp, ic});
    const std::size_t n = vm.rows(), d = vm.cols();
    if (tp.requires_grad(im)) {
      Tensor& gm = tp.ensure_grad(im);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) gm.at(i, j) += g.at(i, j) * vc[i];
    }
    if (tp.requires_grad(ic)) {
      Tensor& gc = tp.ensure_grad(ic);
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < d; ++j) acc += g.at(i, j) * vm.at(i, j);
        gc[i] += acc;
      }
    }
  });
}

Var scale(Var a, double c) {
  return ew_unary(
      a, "scale", [c](double x) { return c * x; },
      [c](double, double) { return c; });
}

Var add_scalar(Var a, double c) {
  return ew_unary(
      a, "add_scalar", [c](double x) { return x + c; },
      [](double, double) { return 1.0; });
}

Var neg(Var a) { return scale(a, -1.0); }

Var mul_const(Var a, const Tensor& c) {
  Tape& t = *a.tape;
  require_same_shape(t.value(a), c, "mul_const");
  const Tensor& va = t.value(a);
  Tensor out(va.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = va[i] * c[i];
  if (!t.requires_grad(a.id)) return t.make_node(std::move(out), false);
  const int ia = a.id;
  auto cc = std::make_shared<Tensor>(c);
  return t.make_node(std::move(out), true, [ia, cc](Tape& tp, int self) {
    const Tensor& g = tp.ensure_grad(self);
    Tensor& ga = tp.ensure_grad(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (*cc)[i];
  });
}

Var relu(Var a) {
  return ew_unary(
      a, "relu", [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Var sigmoid(Var a) {
  return ew_unary(
      a, "sigmoid",
      [](double x) {
        return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                        : std::exp(x) / (1.0 + std::exp(x));
      },
      [](double, double y) { return y * (1.0 - y); });
}

Var tanh_op(Var a) {
  return ew_unary(
      a, "tanh", [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

Var exp_op(Var a) {
  return ew_unary(
      a, "exp", [](double x) { return std::exp(x); },
      [](double, double y) { return y; });
}

Var log_op(Var a) {
  return ew_unary(
      a, "log", [](double x) { return std::log(x); },
      [](double x, double) { return 1.0 / x; }, /*check=*/false);
}

Var square(Var a) {
  return ew_unary(
      a, "square", [](double x) { return x * x; },
      [](double x, double) { return 2.0 * x; });
}

Var abs_op(Var a) {
  return ew_unary(
      a, "abs", [](double x) { return std::fabs(x); },
      [](double x, double) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
}

namespace {

// C[n,m] += A[n,k] * B[k,m], contiguous row-major ikj loop.
void matmul_acc(const double* a, const double* b, double* c, std::size_t n,
                std::size_t k, std::size_t m) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* arow = a + i * k;
    double* crow = c + i * m;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = arow[p];
      if (av == 0.0) continue;
      const double* brow = b + p * m;
      for (std::size_t j = 0; j < m; ++j) crow[j] += av * brow[j];
    }
  }
}

// C[n,m] += A^T[k,n]^T * ... i.e. C += A(tr) with A [k,n]: C[i,j] += A[p,i]*B[p,j]
void matmul_at_b_acc(const double* a, const double* b, double* c,
                     std::size_t k, std::size_t n, std::size_t m) {
  for (std::size_t p = 0; p < k; ++p) {
    const double* arow = a + p * n;
    const double* brow = b + p * m;
    for (std::size_t i = 0; i < n; ++i) {
      const double av = arow[i];
      if (av == 0.0) continue;
      double* crow = c + i * m;
      for (std::size_t j = 0; j < m; ++j) crow[j] += av * brow[j];
    }
  }
}

// C[n,k] += A[n,m] * B^T with B [k,m]: C[i,p] += A[i,j]*B[p,j]
void matmul_a_bt_acc(const double* a, const double* b, double* c,
                     std::size_t n, std::size_t m, std::size_t k) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* arow = a + i * m;
    double* crow = c + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const double* brow = b + p * m;
      double acc = 0.0;
      for (std::size_t j = 0; j < m; ++j) acc += arow[j] * brow[j];
      crow[p] += acc;
    }
  }
}

}  // namespace

Var matmul(Var a, Var b) {
  require_same_tape(a, b, "matmul");
  Tape& t = *a.tape;
  const Tensor& va = t.value(a);
  const Tensor& vb = t.value(b);
  if (va.rank() != 2 || vb.rank() != 2 || va.cols() != vb.rows()) {
    raise(ErrorCode::kShapeMismatch,
          "matmul: " + va.shape_str() + " vs " + vb.shape_str());
  }
  const std::size_t n = va.rows(), k = va.cols(), m = vb.cols();
  Tensor out({n, m});
  matmul_acc(va.data(), vb.data(), out.data(), n, k, m);
  if (!t.requires_grad(a.id) && !t.requires_grad(b.id)) {
    return t.make_node(std::move(out), false);
  }
  const int ia = a.id, ib = b.id;
  return t.make_node(std::move(out), true, [ia, ib](Tape& tp, int self) {
    const Tensor& g = tp.ensure_grad(self);
    const Tensor& va = tp.value(Var{&tp, ia});
    const Tensor& vb = tp.value(Var{&tp, ib});
    const std::size_t n = va.rows(), k = va.cols(), m = vb.cols();
    if (tp.requires_grad(ia)) {
      Tensor& ga = tp.ensure_grad(ia);
      matmul_a_bt_acc(g.data(), vb.data(), ga.data(), n, m, k);
    }
    if (tp.requires_grad(ib)) {
      Tensor& gb = tp.ensure_grad(ib);
      matmul_at_b_acc(va.data(), g.data(), gb.data(), n, k, m);
    }
  });
}

Var reshape(Var a, std::vector<std::size_t> shape) {
  Tape& t = *a.tape;
  const Tensor& va = t.value(a);
  if (Tensor::count(shape) != va.size()) {
    raise(ErrorCode::kShapeMismatch, "reshape: " + va.shape_str());
  }
  Tensor out(std::move(shape), va.values());
  if (!t.requires_grad(a.id)) return t.make_node(std::move(out), false);
  const int ia = a.id;
  return t.make_node(std::move(out), true, [ia](Tape& tp, int self) {
    const Tensor& g = tp.ensure_grad(self);
    Tensor& ga = tp.ensure_grad(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
  });
}

Var concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) raise(ErrorCode::kShapeMismatch, "concat of nothing");
  Tape& t = *parts[0].tape;
  const std::size_t n = t.value(parts[0]).rows();
  std::size_t total = 0;
  bool needs = false;
  for (Var p : parts) {
    require_same_tape(parts[0], p, "concat_cols");
    const Tensor& v = t.value(p);
    if (v.rank() != 2 || v.rows() != n) {
      raise(ErrorCode::kShapeMismatch, "concat_cols: " + v.shape_str());
    }
    total += v.cols();
    needs = needs || t.requires_grad(p.id);
  }
  Tensor out({n, total});
  std::size_t off = 0;
  for (Var p : parts) {
    const Tensor& v = t.value(p);
    for (std::size_t i = 0; i < n; ++i)
      std::memcpy(out.data() + i * total + off, v.data() + i * v.cols(),
                  v.cols() * sizeof(double));
    off += v.cols();
  }
  if (!needs) return t.make_node(std::move(out), false);
  std::vector<int> ids;
  std::vector<std::size_t> widths;
  for (Var p : parts) {
    ids.push_back(p.id);
    widths.push_back(t.value(p).cols());
  }
  return t.make_node(
      std::move(out), true, [ids, widths, n, total](Tape& tp, int self) {
        const Tensor& g = tp.ensure_grad(self);
        std::size_t off = 0;
        for (std::size_t p = 0; p < ids.size(); ++p) {
          if (tp.requires_grad(ids[p])) {
            Tensor& gp = tp.ensure_grad(ids[p]);
            for (std::size_t i = 0; i < n; ++i)
              for (std::size_t j = 0; j < widths[p]; ++j)
                gp.at(i, j) += g[i * total + off + j];
          }
          off += widths[p];
        }
      });
}

Var index_gather(Var a, std::vector<int> rows) {
  Tape& t = *a.tape;
  const Tensor& va = t.value(a);
  if (va.rank() != 2) {
    raise(ErrorCode::kShapeMismatch, "index_gather: " + va.shape_str());
  }
  const std::size_t d = va.cols();
  for (int r : rows) {
    if (r < 0 || static_cast<std::size_t>(r) >= va.rows()) {
      raise(ErrorCode::kShapeMismatch, "index_gather: row out of range");
    }
  }
  Tensor out({rows.size(), d});
  for (std::size_t i = 0; i < rows.size(); ++i)
    std::memcpy(out.data() + i * d, va.data() + rows[i] * d,
                d * sizeof(double));
  if (!t.requires_grad(a.id)) return t.make_node(std::move(out), false);
  const int ia = a.id;
  auto idx = std::make_shared<std::vector<int>>(std::move(rows));
  return t.make_node(std::move(out), true, [ia, idx, d](Tape& tp, int self) {
    const Tensor& g = tp.ensure_grad(self);
    Tensor& ga = tp.ensure_grad(ia);
    for (std::size_t i = 0; i < idx->size(); ++i)
      for (std::size_t j = 0; j < d; ++j)
        ga[static_cast<std::size_t>((*idx)[i]) * d + j] += g[i * d + j];
  });
}

Var sum_all(Var a) {
  Tape& t = *a.tape;
  const Tensor& va = t.value(a);
  double s = 0.0;
  for (double v : va.values()) s += v;
  if (!t.requires_grad(a.id)) return t.make_node(Tensor::scalar(s), false);
  const int ia = a.id;
  return t.make_node(Tensor::scalar(s), true, [ia](Tape& tp, int self) {
    const double g = tp.ensure_grad(self)[0];
    Tensor& ga = tp.ensure_grad(ia);
    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += g;
  });
}

Var mean_all(Var a) {
  Tape& t = *a.tape;
  const Tensor& va = t.value(a);
  const double n = static_cast<double>(va.size());
  double s = 0.0;
  for (double v : va.values()) s += v;
  s /= n;
  if (!t.requires_grad(a.id)) return t.make_node(Tensor::scalar(s), false);
  const int ia = a.id;
  return t.make_node(Tensor::scalar(s), true, [ia, n](Tape& tp, int self) {
    const double g = tp.ensure_grad(self)[0] / n;
    Tensor& ga = tp.ensure_grad(ia);
    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += g;
  });
}

namespace {

Var axis_reduce(Var a, int axis, bool mean, const char* name) {
  Tape& t = *a.tape;
  const Tensor& va = t.value(a);
  if (va.rank() != 2 || (axis != 0 && axis != 1)) {
    raise(ErrorCode::kShapeMismatch,
          std::string(name) + ": need rank-2, axis 0/1, got " + va.shape_str());
  }
  const std::size_t n = va.rows(), d = va.cols();
  const std::size_t out_len = axis == 0 ? d : n;
  const double denom = mean ? static_cast<double>(axis == 0 ? n : d) : 1.0;
  Tensor out({out_len});
  if (axis == 0) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < d; ++j) out[j] += va.at(i, j);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += va.at(i, j);
      out[i] = s;
    }
  }
  if (mean)
    for (double& v : out.values()) v /= denom;
  if (!t.requires_grad(a.id)) return t.make_node(std::move(out), false);
  const int ia = a.id;
  return t.make_node(std::move(out), true,
                     [ia, axis, denom, n, d](Tape& tp, int self) {
                       const Tensor& g = tp.ensure_grad(self);
                       Tensor& ga = tp.ensure_grad(ia);
                       for (std::size_t i = 0; i < n; ++i)
                         for (std::size_t j = 0; j < d; ++j)
                           ga.at(i, j) += g[axis == 0 ? j : i] / denom;
                     });
}

}  // namespace

Var sum_axis(Var a, int axis) { return axis_reduce(a, axis, false, "sum_axis"); }
Var mean_axis(Var a, int axis) { return axis_reduce(a, axis, true, "mean_axis"); }

namespace {

void check_segments(const Tensor& v, const std::vector<int>& seg,
                    int n_segments, const char* name) {
  if (v.rank() != 2 || seg.size() != v.rows()) {
    raise(ErrorCode::kShapeMismatch,
          std::string(name) + ": " + v.shape_str() + " with " +
              std::to_string(seg.size()) + " segment ids");
  }
  int prev = 0;
  for (int s : seg) {
    if (s < prev || s >= n_segments) {
      raise(ErrorCode::kShapeMismatch,
            std::string(name) + ": segment ids must be sorted and < n");
    }
    prev = s;
  }
}

}  // namespace

Var segment_sum(Var a, std::vector<int> segments, int n_segments) {
  Tape& t = *a.tape;
  const Tensor& va = t.value(a);
  check_segments(va, segments, n_segments, "segment_sum");
  const std::size_t d = va.cols();
  Tensor out({static_cast<std::size_t>(n_segments), d});
  for (std::size_t i = 0; i < segments.size(); ++i)
    for (std::size_t j = 0; j < d; ++j)
      out.at(segments[i], j) += va.at(i, j);
  if (!t.requires_grad(a.id)) return t.make_node(std::move(out), false);
  const int ia = a.id;
  auto seg = std::make_shared<std::vector<int>>(std::move(segments));
  return t.make_node(std::move(out), true, [ia, seg, d](Tape& tp, int self) {
    const Tensor& g = tp.ensure_grad(self);
    Tensor& ga = tp.ensure_grad(ia);
    for (std::size_t i = 0; i < seg->size(); ++i)
      for (std::size_t j = 0; j < d; ++j)
        ga.at(i, j) += g.at((*seg)[i], j);
  });
}

Var segment_mean(Var a, std::vector<int> segments, int n_segments) {
  Tape& t = *a.tape;
  const Tensor& va = t.value(a);
  check_segments(va, segments, n_segments, "segment_mean");
  const std::size_t d = va.cols();
  std::vector<double> counts(n_segments, 0.0);
  for (int s : segments) counts[s] += 1.0;
  Tensor out({static_cast<std::size_t>(n_segments), d});
  for (std::size_t i = 0; i < segments.size(); ++i)
    for (std::size_t j = 0; j < d; ++j)
      out.at(segments[i], j) += va.at(i, j);
  for (int s = 0; s < n_segments; ++s) {
    if (counts[s] == 0.0) continue;
    for (std::size_t j = 0; j < d; ++j) out.at(s, j) /= counts[s];
  }
  if (!t.requires_grad(a.id)) return t.make_node(std::move(out), false);
  const int ia = a.id;
  auto seg = std::make_shared<std::vector<int>>(std::move(segments));
  auto cnt = std::make_shared<std::vector<double>>(std::move(counts));
  return t.make_node(std::move(out), true,
                     [ia, seg, cnt, d](Tape& tp, int self) {
                       const Tensor& g = tp.ensure_grad(self);
                       Tensor& ga = tp.ensure_grad(ia);
                       for (std::size_t i = 0; i < seg->size(); ++i)
                         for (std::size_t j = 0; j < d; ++j)
                           ga.at(i, j) +=
                               g.at((*seg)[i], j) / (*cnt)[(*seg)[i]];
                     });
}

Var softmax_rows(Var a) {
  Tape& t = *a.tape;
  const Tensor& va = t.value(a);
  if (va.rank() != 2) {
    raise(ErrorCode::kShapeMismatch, "softmax_rows: " + va.shape_str());
  }
  const std::size_t n = va.rows(), d = va.cols();
  Tensor out({n, d});
  for (std::size_t i = 0; i < n; ++i) {
    double mx = va.at(i, 0);
    for (std::size_t j = 1; j < d; ++j) mx = std::max(mx, va.at(i, j));
    double z = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      out.at(i, j) = std::exp(va.at(i, j) - mx);
      z += out.at(i, j);
    }
    for (std::size_t j = 0; j < d; ++j) out.at(i, j) /= z;
  }
  if (!t.requires_grad(a.id)) return t.make_node(std::move(out), false);
  const int ia = a.id;
  return t.make_node(std::move(out), true, [ia, n, d](Tape& tp, int self) {
    const Tensor& g = tp.ensure_grad(self);
    const Tensor& y = tp.value(Var{&tp, self});
    Tensor& ga = tp.ensure_grad(ia);
    for (std::size_t i = 0; i < n; ++i) {
      double dot = 0.0;
      for (std::size_t j = 0; j < d; ++j) dot += g.at(i, j) * y.at(i, j);
      for (std::size_t j = 0; j < d; ++j)
        ga.at(i, j) += y.at(i, j) * (g.at(i, j) - dot);
    }
  });
}

Var segment_softmax(Var scores, std::vector<int> segments, int n_segments) {
  Tape& t = *scores.tape;
  const Tensor& vs = t.value(scores);
  if (vs.rank() != 1 || vs.size() != segments.size()) {
    raise(ErrorCode::kShapeMismatch, "segment_softmax: " + vs.shape_str());
  }
  const std::size_t n = vs.size();
  std::vector<double> mx(n_segments, -1e300);
  for (std::size_t i = 0; i < n; ++i)
    mx[segments[i]] = std::max(mx[segments[i]], vs[i]);
  Tensor out({n});
  std::vector<double> z(n_segments, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(vs[i] - mx[segments[i]]);
    z[segments[i]] += out[i];
  }
  for (std::size_t i = 0; i < n; ++i) out[i] /= z[segments[i]];
  if (!t.requires_grad(scores.id)) return t.make_node(std::move(out), false);
  const int ia = scores.id;
  auto seg = std::make_shared<std::vector<int>>(std::move(segments));
  const std::size_t ns = static_cast<std::size_t>(n_segments);
  return t.make_node(std::move(out), true, [ia, seg, ns](Tape& tp, int self) {
    const Tensor& g = tp.ensure_grad(self);
    const Tensor& y = tp.value(Var{&tp, self});
    Tensor& ga = tp.ensure_grad(ia);
    std::vector<double> dot(ns, 0.0);
    for (std::size_t i = 0; i < y.size(); ++i)
      dot[(*seg)[i]] += g[i] * y[i];
    for (std::size_t i = 0; i < y.size(); ++i)
      ga[i] += y[i] * (g[i] - dot[(*seg)[i]]);
  });
}

Var dropout(Var a, double rate, RngStream stream, bool train) {
  if (rate < 0.0 || rate >= 1.0) {
    raise(ErrorCode::kConfigError,
          "dropout rate must be in [0,1), got " + std::to_string(rate));
  }
  if (!train || rate == 0.0) return a;
  Tape& t = *a.tape;
  const Tensor& va = t.value(a);
  const double keep_scale = 1.0 / (1.0 - rate);
  auto mask = std::make_shared<std::vector<double>>(va.size());
  Tensor out(va.shape());
  for (std::size_t i = 0; i < va.size(); ++i) {
    const double u =
        static_cast<double>(stream.at(i) >> 11) * 0x1.0p-53;
    (*mask)[i] = u >= rate ? keep_scale : 0.0;
    out[i] = va[i] * (*mask)[i];
  }
  if (!t.requires_grad(a.id)) return t.make_node(std::move(out), false);
  const int ia = a.id;
  return t.make_node(std::move(out), true, [ia, mask](Tape& tp, int self) {
    const Tensor& g = tp.ensure_grad(self);
    Tensor& ga = tp.ensure_grad(ia);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (*mask)[i];
  });
}

Var bce_with_logits(Var logits, const Tensor& targets) {
  Tape& t = *logits.tape;
  const Tensor& z = t.value(logits);
  require_same_shape(z, targets, "bce_with_logits");
  Tensor out(z.shape());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double zi = z[i];
    out[i] = std::max(zi, 0.0) - zi * targets[i] +
             std::log1p(std::exp(-std::fabs(zi)));
  }
  if (!t.requires_grad(logits.id)) return t.make_node(std::move(out), false);
  const int ia = logits.id;
  auto y = std::make_shared<Tensor>(targets);
  return t.make_node(std::move(out), true, [ia, y](Tape& tp, int self) {
    const Tensor& g = tp.ensure_grad(self);
    const Tensor& z = tp.value(Var{&tp, ia});
    Tensor& ga = tp.ensure_grad(ia);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double s = z[i] >= 0.0 ? 1.0 / (1.0 + std::exp(-z[i]))
                                   : std::exp(z[i]) / (1.0 + std::exp(z[i]));
      ga[i] += g[i] * (s - (*y)[i]);
    }
  });
}

Var mse_elems(Var preds, const Tensor& targets) {
  Tape& t = *preds.tape;
  const Tensor& p = t.value(preds);
  require_same_shape(p, targets, "mse");
  Tensor out(p.shape());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - targets[i];
    out[i] = d * d;
  }
  if (!t.requires_grad(preds.id)) return t.make_node(std::move(out), false);
  const int ia = preds.id;
  auto y = std::make_shared<Tensor>(targets);
  return t.make_node(std::move(out), true, [ia, y](Tape& tp, int self) {
    const Tensor& g = tp.ensure_grad(self);
    const Tensor& p = tp.value(Var{&tp, ia});
    Tensor& ga = tp.ensure_grad(ia);
    for (std::size_t i = 0; i < g.size(); ++i)
      ga[i] += g[i] * 2.0 * (p[i] - (*y)[i]);
  });
}

Var mae_elems(Var preds, const Tensor& targets) {
  Tape& t = *preds.tape;
  const Tensor& p = t.value(preds);
  require_same_shape(p, targets, "mae");
  Tensor out(p.shape());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = std::fabs(p[i] - targets[i]);
  if (!t.requires_grad(preds.id)) return t.make_node(std::move(out), false);
  const int ia = preds.id;
  auto y = std::make_shared<Tensor>(targets);
  return t.make_node(std::move(out), true, [ia, y](Tape& tp, int self) {
    const Tensor& g = tp.ensure_grad(self);
    const Tensor& p = tp.value(Var{&tp, ia});
    Tensor& ga = tp.ensure_grad(ia);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double d = p[i] - (*y)[i];
      ga[i] += g[i] * (d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0));
    }
  });
}

}  // namespace ibio::tk::ops
