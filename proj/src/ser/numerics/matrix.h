// ser/numerics/matrix.h

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

#pragma once

#include <initializer_list>
#include <span>
#include <vector>

namespace ser::numerics {

// Dense row-major matrix of doubles. Everything in the two model branches is
// rank <= 2, so this plus batch loops is the whole tensor story.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols);  // zero-initialized
  Matrix(int rows, int cols, double fill);

  static Matrix identity(int n);
  /// Build from nested braces, e.g. Matrix::of({{1, 2}, {3, 4}}).
  static Matrix of(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix row_vector(std::span<const double> v);
  static Matrix column_vector(std::span<const double> v);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  long size() const { return static_cast<long>(rows_) * cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double &operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  double *data() { return data_.data(); }
  const double *data() const { return data_.data(); }
  std::span<double> row(int r) { return {data_.data() + static_cast<size_t>(r) * cols_, static_cast<size_t>(cols_)}; }
  std::span<const double> row(int r) const { return {data_.data() + static_cast<size_t>(r) * cols_, static_cast<size_t>(cols_)}; }

  bool same_shape(const Matrix &o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

Matrix matmul(const Matrix &a, const Matrix &b);     // a * b
Matrix matmul_nt(const Matrix &a, const Matrix &b);  // a * b^T
Matrix matmul_tn(const Matrix &a, const Matrix &b);  // a^T * b
Matrix transpose(const Matrix &m);
Matrix add(const Matrix &a, const Matrix &b);
Matrix sub(const Matrix &a, const Matrix &b);
Matrix scale(const Matrix &a, double s);
Matrix hadamard(const Matrix &a, const Matrix &b);
void add_in_place(Matrix &a, const Matrix &b);

double max_abs(const Matrix &m);
double max_abs_diff(const Matrix &a, const Matrix &b);
double frobenius_norm(const Matrix &m);
bool all_finite(const Matrix &m);

}  // namespace ser::numerics
