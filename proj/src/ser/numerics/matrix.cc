// ser/numerics/matrix.cc

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

#include "ser/numerics/matrix.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "ser/common/error.h"

namespace ser::numerics {

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw StructuralError("Matrix: negative dimension");
  data_.assign(static_cast<size_t>(rows) * cols, 0.0);
}

Matrix::Matrix(int rows, int cols, double fill) : Matrix(rows, cols) {
  std::fill(data_.begin(), data_.end(), fill);
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::of(std::initializer_list<std::initializer_list<double>> rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
  Matrix m(r, c);
  int i = 0;
  for (const auto &row : rows) {
    if (static_cast<int>(row.size()) != c)
      throw StructuralError("Matrix::of: ragged rows");
    int j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Matrix Matrix::row_vector(std::span<const double> v) {
  Matrix m(1, static_cast<int>(v.size()));
  std::copy(v.begin(), v.end(), m.data());
  return m;
}

Matrix Matrix::column_vector(std::span<const double> v) {
  Matrix m(static_cast<int>(v.size()), 1);
  std::copy(v.begin(), v.end(), m.data());
  return m;
}

namespace {
void require(bool ok, const char *what) {
  if (!ok) throw StructuralError(std::string("matrix: ") + what);
}
}  // namespace

Matrix matmul(const Matrix &a, const Matrix &b) {
  require(a.cols() == b.rows(), "matmul dimension mismatch");
  Matrix c(a.rows(), b.cols());
  const int m = a.rows(), k = a.cols(), n = b.cols();
  for (int i = 0; i < m; ++i) {
    double *ci = c.data() + static_cast<size_t>(i) * n;
    const double *ai = a.data() + static_cast<size_t>(i) * k;
    for (int p = 0; p < k; ++p) {
      const double aip = ai[p];
      if (aip == 0.0) continue;
      const double *bp = b.data() + static_cast<size_t>(p) * n;
      for (int j = 0; j < n; ++j) ci[j] += aip * bp[j];
    }
  }
  return c;
}

Matrix matmul_nt(const Matrix &a, const Matrix &b) {
  require(a.cols() == b.cols(), "matmul_nt dimension mismatch");
  Matrix c(a.rows(), b.rows());
  const int m = a.rows(), k = a.cols(), n = b.rows();
  for (int i = 0; i < m; ++i) {
    const double *ai = a.data() + static_cast<size_t>(i) * k;
    for (int j = 0; j < n; ++j) {
      const double *bj = b.data() + static_cast<size_t>(j) * k;
      double s = 0.0;
      for (int p = 0; p < k; ++p) s += ai[p] * bj[p];
      c(i, j) = s;
    }
  }
  return c;
}

Matrix matmul_tn(const Matrix &a, const Matrix &b) {
  require(a.rows() == b.rows(), "matmul_tn dimension mismatch");
  Matrix c(a.cols(), b.cols());
  const int m = a.cols(), k = a.rows(), n = b.cols();
  for (int p = 0; p < k; ++p) {
    const double *ap = a.data() + static_cast<size_t>(p) * m;
    const double *bp = b.data() + static_cast<size_t>(p) * n;
    for (int i = 0; i < m; ++i) {
      const double api = ap[i];
      if (api == 0.0) continue;
      double *ci = c.data() + static_cast<size_t>(i) * n;
      for (int j = 0; j < n; ++j) ci[j] += api * bp[j];
    }
  }
  return c;
}

Matrix transpose(const Matrix &m) {
  Matrix t(m.cols(), m.rows());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

Matrix add(const Matrix &a, const Matrix &b) {
  require(a.same_shape(b), "add shape mismatch");
  Matrix c = a;
  for (long i = 0; i < c.size(); ++i) c.data()[i] += b.data()[i];
  return c;
}

Matrix sub(const Matrix &a, const Matrix &b) {
  require(a.same_shape(b), "sub shape mismatch");
  Matrix c = a;
  for (long i = 0; i < c.size(); ++i) c.data()[i] -= b.data()[i];
  return c;
}

Matrix scale(const Matrix &a, double s) {
  Matrix c = a;
  for (long i = 0; i < c.size(); ++i) c.data()[i] *= s;
  return c;
}

Matrix hadamard(const Matrix &a, const Matrix &b) {
  require(a.same_shape(b), "hadamard shape mismatch");
  Matrix c = a;
  for (long i = 0; i < c.size(); ++i) c.data()[i] *= b.data()[i];
  return c;
}

void add_in_place(Matrix &a, const Matrix &b) {
  require(a.same_shape(b), "add_in_place shape mismatch");
  for (long i = 0; i < a.size(); ++i) a.data()[i] += b.data()[i];
}

double max_abs(const Matrix &m) {
  double v = 0.0;
  for (long i = 0; i < m.size(); ++i) v = std::max(v, std::fabs(m.data()[i]));
  return v;
}

double max_abs_diff(const Matrix &a, const Matrix &b) {
  require(a.same_shape(b), "max_abs_diff shape mismatch");
  double v = 0.0;
  for (long i = 0; i < a.size(); ++i)
    v = std::max(v, std::fabs(a.data()[i] - b.data()[i]));
  return v;
}

double frobenius_norm(const Matrix &m) {
  double s = 0.0;
  for (long i = 0; i < m.size(); ++i) s += m.data()[i] * m.data()[i];
  return std::sqrt(s);
}

bool all_finite(const Matrix &m) {
  for (long i = 0; i < m.size(); ++i)
    if (!std::isfinite(m.data()[i])) return false;
  return true;
}

}  // namespace ser::numerics
