// ser/numerics/autodiff.cc

// Copyright 2026  ser-duo contributors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "ser/numerics/autodiff.h"

#include <cmath>
#include <memory>

#include "ser/common/error.h"
#include "ser/numerics/ops.h"

namespace ser::numerics {

namespace {
constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;
constexpr double kLayerNormEps = 1e-5;
}  // namespace

Tape::Var Tape::push(Matrix value, bool requires_grad,
                     std::function<void()> back) {
  nodes_.push_back(Node{std::move(value), Matrix(), requires_grad,
                        std::move(back)});
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Matrix &Tape::grad_buf(int id) {
  Node &n = nodes_[id];
  if (n.grad.empty() && !n.value.empty())
    n.grad = Matrix(n.value.rows(), n.value.cols());
  return n.grad;
}

void Tape::accumulate(int id, const Matrix &g) {
  add_in_place(grad_buf(id), g);
}

const Matrix &Tape::grad(Var v) { return grad_buf(v.id); }

Tape::Var Tape::leaf(const Matrix &v, bool requires_grad) {
  return push(v, requires_grad, {});
}

Tape::Var Tape::add(Var a, Var b) {
  const Matrix out = numerics::add(value(a), value(b));
  const bool rg = nodes_[a.id].requires_grad || nodes_[b.id].requires_grad;
  Var r = push(out, rg, {});
  nodes_[r.id].back = [this, a, b, r] {
    const Matrix &g = nodes_[r.id].grad;
    if (nodes_[a.id].requires_grad) accumulate(a.id, g);
    if (nodes_[b.id].requires_grad) accumulate(b.id, g);
  };
  return r;
}

Tape::Var Tape::add_rowvec(Var a, Var v) {
  const Matrix &x = value(a);
  const Matrix &b = value(v);
  if (b.rows() != 1 || b.cols() != x.cols())
    throw StructuralError("add_rowvec: bias must be 1 x cols(a)");
  Matrix out = x;
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < out.cols(); ++j) out(i, j) += b(0, j);
  const bool rg = nodes_[a.id].requires_grad || nodes_[v.id].requires_grad;
  Var r = push(std::move(out), rg, {});
  nodes_[r.id].back = [this, a, v, r] {
    const Matrix &g = nodes_[r.id].grad;
    if (nodes_[a.id].requires_grad) accumulate(a.id, g);
    if (nodes_[v.id].requires_grad) {
      Matrix gv(1, g.cols());
      for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j) gv(0, j) += g(i, j);
      accumulate(v.id, gv);
    }
  };
  return r;
}

Tape::Var Tape::scale(Var a, double s) {
  Var r = push(numerics::scale(value(a), s), nodes_[a.id].requires_grad, {});
  nodes_[r.id].back = [this, a, r, s] {
    if (nodes_[a.id].requires_grad)
      accumulate(a.id, numerics::scale(nodes_[r.id].grad, s));
  };
  return r;
}

Tape::Var Tape::matmul(Var a, Var b) {
  const bool rg = nodes_[a.id].requires_grad || nodes_[b.id].requires_grad;
  Var r = push(numerics::matmul(value(a), value(b)), rg, {});
  nodes_[r.id].back = [this, a, b, r] {
    const Matrix &g = nodes_[r.id].grad;
    if (nodes_[a.id].requires_grad)
      accumulate(a.id, numerics::matmul_nt(g, value(b)));
    if (nodes_[b.id].requires_grad)
      accumulate(b.id, numerics::matmul_tn(value(a), g));
  };
  return r;
}

Tape::Var Tape::matmul_nt(Var a, Var b) {
  const bool rg = nodes_[a.id].requires_grad || nodes_[b.id].requires_grad;
  Var r = push(numerics::matmul_nt(value(a), value(b)), rg, {});
  nodes_[r.id].back = [this, a, b, r] {
    const Matrix &g = nodes_[r.id].grad;
    if (nodes_[a.id].requires_grad)
      accumulate(a.id, numerics::matmul(g, value(b)));
    if (nodes_[b.id].requires_grad)
      accumulate(b.id, numerics::matmul_tn(g, value(a)));
  };
  return r;
}

Tape::Var Tape::relu(Var a) {
  Matrix out = value(a);
  for (long i = 0; i < out.size(); ++i)
    if (out.data()[i] < 0.0) out.data()[i] = 0.0;
  Var r = push(std::move(out), nodes_[a.id].requires_grad, {});
  nodes_[r.id].back = [this, a, r] {
    if (!nodes_[a.id].requires_grad) return;
    const Matrix &g = nodes_[r.id].grad;
    const Matrix &x = value(a);
    Matrix gx = g;
    for (long i = 0; i < gx.size(); ++i)
      if (x.data()[i] <= 0.0) gx.data()[i] = 0.0;
    accumulate(a.id, gx);
  };
  return r;
}

Tape::Var Tape::gelu(Var a) {
  const Matrix &x = value(a);
  Matrix out = x;
  for (long i = 0; i < out.size(); ++i) {
    const double v = x.data()[i];
    out.data()[i] = 0.5 * v * (1.0 + std::erf(v * kInvSqrt2));
  }
  Var r = push(std::move(out), nodes_[a.id].requires_grad, {});
  nodes_[r.id].back = [this, a, r] {
    if (!nodes_[a.id].requires_grad) return;
    const Matrix &g = nodes_[r.id].grad;
    const Matrix &x = value(a);
    Matrix gx = g;
    for (long i = 0; i < gx.size(); ++i) {
      const double v = x.data()[i];
      const double cdf = 0.5 * (1.0 + std::erf(v * kInvSqrt2));
      const double pdf = kInvSqrt2Pi * std::exp(-0.5 * v * v);
      gx.data()[i] *= cdf + v * pdf;
    }
    accumulate(a.id, gx);
  };
  return r;
}

Tape::Var Tape::softmax_rows(Var a) {
  const Matrix &x = value(a);
  Matrix out(x.rows(), x.cols());
  for (int i = 0; i < x.rows(); ++i) {
    const std::vector<double> p = softmax(x.row(i));
    for (int j = 0; j < x.cols(); ++j) out(i, j) = p[j];
  }
  Var r = push(std::move(out), nodes_[a.id].requires_grad, {});
  nodes_[r.id].back = [this, a, r] {
    if (!nodes_[a.id].requires_grad) return;
    const Matrix &g = nodes_[r.id].grad;
    const Matrix &y = nodes_[r.id].value;
    Matrix gx(g.rows(), g.cols());
    for (int i = 0; i < g.rows(); ++i) {
      double dot = 0.0;
      for (int j = 0; j < g.cols(); ++j) dot += g(i, j) * y(i, j);
      for (int j = 0; j < g.cols(); ++j)
        gx(i, j) = y(i, j) * (g(i, j) - dot);
    }
    accumulate(a.id, gx);
  };
  return r;
}

Tape::Var Tape::layer_norm(Var a, Var gain, Var bias) {
  const Matrix &x = value(a);
  const Matrix &gm = value(gain);
  const Matrix &bm = value(bias);
  if (gm.rows() != 1 || gm.cols() != x.cols() || bm.rows() != 1 ||
      bm.cols() != x.cols())
    throw StructuralError("layer_norm: gain/bias must be 1 x cols(a)");
  const int rows = x.rows(), cols = x.cols();
  Matrix xhat(rows, cols);
  std::vector<double> inv_sigma(rows);
  for (int i = 0; i < rows; ++i) {
    double mu = 0.0;
    for (int j = 0; j < cols; ++j) mu += x(i, j);
    mu /= cols;
    double var = 0.0;
    for (int j = 0; j < cols; ++j) {
      const double d = x(i, j) - mu;
      var += d * d;
    }
    var /= cols;
    inv_sigma[i] = 1.0 / std::sqrt(var + kLayerNormEps);
    for (int j = 0; j < cols; ++j) xhat(i, j) = (x(i, j) - mu) * inv_sigma[i];
  }
  Matrix out(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      out(i, j) = gm(0, j) * xhat(i, j) + bm(0, j);
  const bool rg = nodes_[a.id].requires_grad || nodes_[gain.id].requires_grad ||
                  nodes_[bias.id].requires_grad;
  Var r = push(std::move(out), rg, {});
  nodes_[r.id].back = [this, a, gain, bias, r, xhat = std::move(xhat),
                       inv_sigma = std::move(inv_sigma)] {
    const Matrix &g = nodes_[r.id].grad;
    const int rows = g.rows(), cols = g.cols();
    if (nodes_[gain.id].requires_grad) {
      Matrix gg(1, cols);
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) gg(0, j) += g(i, j) * xhat(i, j);
      accumulate(gain.id, gg);
    }
    if (nodes_[bias.id].requires_grad) {
      Matrix gb(1, cols);
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) gb(0, j) += g(i, j);
      accumulate(bias.id, gb);
    }
    if (nodes_[a.id].requires_grad) {
      const Matrix &gm = value(gain);
      Matrix gx(rows, cols);
      for (int i = 0; i < rows; ++i) {
        double mean_dxhat = 0.0, mean_dxhat_xhat = 0.0;
        for (int j = 0; j < cols; ++j) {
          const double dxh = g(i, j) * gm(0, j);
          mean_dxhat += dxh;
          mean_dxhat_xhat += dxh * xhat(i, j);
        }
        mean_dxhat /= cols;
        mean_dxhat_xhat /= cols;
        for (int j = 0; j < cols; ++j) {
          const double dxh = g(i, j) * gm(0, j);
          gx(i, j) = inv_sigma[i] *
                     (dxh - mean_dxhat - xhat(i, j) * mean_dxhat_xhat);
        }
      }
      accumulate(a.id, gx);
    }
  };
  return r;
}

Tape::Var Tape::sum_rows(Var a) {
  const Matrix &x = value(a);
  Matrix out(1, x.cols());
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) out(0, j) += x(i, j);
  Var r = push(std::move(out), nodes_[a.id].requires_grad, {});
  nodes_[r.id].back = [this, a, r] {
    if (!nodes_[a.id].requires_grad) return;
    const Matrix &g = nodes_[r.id].grad;
    const Matrix &x = value(a);
    Matrix gx(x.rows(), x.cols());
    for (int i = 0; i < x.rows(); ++i)
      for (int j = 0; j < x.cols(); ++j) gx(i, j) = g(0, j);
    accumulate(a.id, gx);
  };
  return r;
}

Tape::Var Tape::mean_rows(Var a) {
  const Matrix &x = value(a);
  if (x.rows() == 0) throw StructuralError("mean_rows: empty input");
  Var s = sum_rows(a);
  return scale(s, 1.0 / x.rows());
}

Tape::Var Tape::slice_cols(Var a, int first, int width) {
  const Matrix &x = value(a);
  if (first < 0 || width <= 0 || first + width > x.cols())
    throw StructuralError("slice_cols: range out of bounds");
  Matrix out(x.rows(), width);
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < width; ++j) out(i, j) = x(i, first + j);
  Var r = push(std::move(out), nodes_[a.id].requires_grad, {});
  nodes_[r.id].back = [this, a, r, first, width] {
    if (!nodes_[a.id].requires_grad) return;
    const Matrix &g = nodes_[r.id].grad;
    const Matrix &x = value(a);
    Matrix gx(x.rows(), x.cols());
    for (int i = 0; i < g.rows(); ++i)
      for (int j = 0; j < width; ++j) gx(i, first + j) = g(i, j);
    accumulate(a.id, gx);
  };
  return r;
}

Tape::Var Tape::concat_cols(const std::vector<Var> &parts) {
  if (parts.empty()) throw StructuralError("concat_cols: no parts");
  const int rows = value(parts[0]).rows();
  int cols = 0;
  bool rg = false;
  for (Var p : parts) {
    if (value(p).rows() != rows)
      throw StructuralError("concat_cols: row mismatch");
    cols += value(p).cols();
    rg = rg || nodes_[p.id].requires_grad;
  }
  Matrix out(rows, cols);
  int at = 0;
  for (Var p : parts) {
    const Matrix &x = value(p);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < x.cols(); ++j) out(i, at + j) = x(i, j);
    at += x.cols();
  }
  Var r = push(std::move(out), rg, {});
  nodes_[r.id].back = [this, parts, r] {
    const Matrix &g = nodes_[r.id].grad;
    int at = 0;
    for (Var p : parts) {
      const Matrix &x = value(p);
      if (nodes_[p.id].requires_grad) {
        Matrix gp(x.rows(), x.cols());
        for (int i = 0; i < x.rows(); ++i)
          for (int j = 0; j < x.cols(); ++j) gp(i, j) = g(i, at + j);
        accumulate(p.id, gp);
      }
      at += x.cols();
    }
  };
  return r;
}

Tape::Var Tape::replace_masked_rows(Var a, const std::vector<uint8_t> &mask,
                                    Var m) {
  const Matrix &x = value(a);
  const Matrix &mv = value(m);
  if (static_cast<int>(mask.size()) != x.rows())
    throw StructuralError("replace_masked_rows: mask length mismatch");
  if (mv.rows() != 1 || mv.cols() != x.cols())
    throw StructuralError("replace_masked_rows: vector must be 1 x cols(a)");
  Matrix out = x;
  for (int i = 0; i < x.rows(); ++i)
    if (mask[i])
      for (int j = 0; j < x.cols(); ++j) out(i, j) = mv(0, j);
  const bool rg = nodes_[a.id].requires_grad || nodes_[m.id].requires_grad;
  Var r = push(std::move(out), rg, {});
  nodes_[r.id].back = [this, a, m, r, mask] {
    const Matrix &g = nodes_[r.id].grad;
    if (nodes_[a.id].requires_grad) {
      Matrix gx = g;
      for (int i = 0; i < gx.rows(); ++i)
        if (mask[i])
          for (int j = 0; j < gx.cols(); ++j) gx(i, j) = 0.0;
      accumulate(a.id, gx);
    }
    if (nodes_[m.id].requires_grad) {
      Matrix gm(1, g.cols());
      for (int i = 0; i < g.rows(); ++i)
        if (mask[i])
          for (int j = 0; j < g.cols(); ++j) gm(0, j) += g(i, j);
      accumulate(m.id, gm);
    }
  };
  return r;
}

Tape::Var Tape::normalize_rows(Var a) {
  const Matrix &x = value(a);
  Matrix out(x.rows(), x.cols());
  std::vector<double> norms(x.rows(), 0.0);
  for (int i = 0; i < x.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < x.cols(); ++j) s += x(i, j) * x(i, j);
    norms[i] = std::sqrt(s);
    if (norms[i] > 0.0)
      for (int j = 0; j < x.cols(); ++j) out(i, j) = x(i, j) / norms[i];
  }
  Var r = push(std::move(out), nodes_[a.id].requires_grad, {});
  nodes_[r.id].back = [this, a, r, norms = std::move(norms)] {
    if (!nodes_[a.id].requires_grad) return;
    const Matrix &g = nodes_[r.id].grad;
    const Matrix &y = nodes_[r.id].value;
    Matrix gx(g.rows(), g.cols());
    for (int i = 0; i < g.rows(); ++i) {
      if (norms[i] <= 0.0) continue;  // zero rows carry no gradient
      double dot = 0.0;
      for (int j = 0; j < g.cols(); ++j) dot += g(i, j) * y(i, j);
      for (int j = 0; j < g.cols(); ++j)
        gx(i, j) = (g(i, j) - dot * y(i, j)) / norms[i];
    }
    accumulate(a.id, gx);
  };
  return r;
}

Tape::Var Tape::spectral_filter(Var h, const std::vector<Matrix> &l_powers,
                                Var theta) {
  const Matrix &hm = value(h);
  const Matrix &tm = value(theta);
  if (tm.rows() != 1 || tm.cols() != static_cast<int>(l_powers.size()))
    throw StructuralError("spectral_filter: theta must be 1 x num_powers");
  // Cache L^m * H terms; both the forward sum and d(theta) reuse them.
  auto terms = std::make_shared<std::vector<Matrix>>();
  Matrix out(hm.rows(), hm.cols());
  for (size_t m = 0; m < l_powers.size(); ++m) {
    if (l_powers[m].rows() != hm.rows() || l_powers[m].cols() != hm.rows())
      throw StructuralError("spectral_filter: operator size mismatch");
    terms->push_back(numerics::matmul(l_powers[m], hm));
    add_in_place(out, numerics::scale(terms->back(), tm(0, m)));
  }
  const bool rg = nodes_[h.id].requires_grad || nodes_[theta.id].requires_grad;
  Var r = push(std::move(out), rg, {});
  nodes_[r.id].back = [this, h, theta, r, &l_powers, terms] {
    const Matrix &g = nodes_[r.id].grad;
    const Matrix &tm = value(theta);
    if (nodes_[h.id].requires_grad) {
      Matrix gh(g.rows(), g.cols());
      for (size_t m = 0; m < terms->size(); ++m)
        add_in_place(gh, numerics::scale(numerics::matmul(l_powers[m], g),
                                         tm(0, m)));
      accumulate(h.id, gh);
    }
    if (nodes_[theta.id].requires_grad) {
      Matrix gt(1, tm.cols());
      for (size_t m = 0; m < terms->size(); ++m) {
        double s = 0.0;
        const Matrix &t = (*terms)[m];
        for (long i = 0; i < t.size(); ++i) s += t.data()[i] * g.data()[i];
        gt(0, m) = s;
      }
      accumulate(theta.id, gt);
    }
  };
  return r;
}

Tape::Var Tape::masked_cross_entropy(Var logits, const std::vector<int> &labels,
                                     const std::vector<uint8_t> &mask) {
  const Matrix &x = value(logits);
  const int rows = x.rows(), cols = x.cols();
  if (static_cast<int>(labels.size()) != rows ||
      static_cast<int>(mask.size()) != rows)
    throw StructuralError("masked_cross_entropy: labels/mask length mismatch");
  int masked = 0;
  for (uint8_t f : mask) masked += f ? 1 : 0;
  if (masked == 0)
    throw StructuralError("masked_cross_entropy: no masked rows");
  auto probs = std::make_shared<Matrix>(rows, cols);
  double loss = 0.0;
  for (int i = 0; i < rows; ++i) {
    if (!mask[i]) continue;
    if (labels[i] < 0 || labels[i] >= cols)
      throw StructuralError("masked_cross_entropy: label out of range");
    const std::vector<double> p = softmax(x.row(i));
    for (int j = 0; j < cols; ++j) (*probs)(i, j) = p[j];
    loss += cross_entropy(p, labels[i]);
  }
  loss /= masked;
  Matrix out(1, 1);
  out(0, 0) = loss;
  Var r = push(std::move(out), nodes_[logits.id].requires_grad, {});
  nodes_[r.id].back = [this, logits, r, labels, mask, masked, probs] {
    if (!nodes_[logits.id].requires_grad) return;
    const double g = nodes_[r.id].grad(0, 0);
    Matrix gx(probs->rows(), probs->cols());
    for (int i = 0; i < gx.rows(); ++i) {
      if (!mask[i]) continue;
      for (int j = 0; j < gx.cols(); ++j) {
        const double onehot = (j == labels[i]) ? 1.0 : 0.0;
        gx(i, j) = g * ((*probs)(i, j) - onehot) / masked;
      }
    }
    accumulate(logits.id, gx);
  };
  return r;
}

Tape::Var Tape::cross_entropy_logits(Var logits, int label) {
  const Matrix &x = value(logits);
  if (x.rows() != 1)
    throw StructuralError("cross_entropy_logits: expected a single row");
  return masked_cross_entropy(logits, {label}, {1});
}

void Tape::backward(Var loss) {
  const Matrix &lv = value(loss);
  if (lv.rows() != 1 || lv.cols() != 1)
    throw StructuralError("backward: loss must be 1 x 1");
  for (Node &n : nodes_) {
    if (!n.grad.empty())
      n.grad = Matrix(n.value.rows(), n.value.cols());
  }
  grad_buf(loss.id)(0, 0) = 1.0;
  for (int i = loss.id; i >= 0; --i) {
    Node &n = nodes_[i];
    if (!n.requires_grad || n.grad.empty() || !n.back) continue;
    n.back();
  }
  for (int i = 0; i < static_cast<int>(nodes_.size()); ++i) grad_buf(i);
}

}  // namespace ser::numerics
