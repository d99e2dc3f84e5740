// ser/numerics/autodiff.h

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

#include <cstdint>
#include <functional>
#include <vector>

#include "ser/numerics/matrix.h"

namespace ser::numerics {

// Reverse-mode tape over dense matrices. A tape is built per forward pass,
// backward() runs the recorded closures in reverse creation order (which is
// already topological). Ops that the two model branches need are provided as
// fused nodes with hand-derived adjoints; everything that trains goes
// through here, so one grad_check harness covers the whole repo.
class Tape {
 public:
  struct Var {
    int id = -1;
    bool valid() const { return id >= 0; }
  };

  /// New leaf holding a copy of v. Parameters set requires_grad.
  Var leaf(const Matrix &v, bool requires_grad = false);

  Var add(Var a, Var b);
  /// a (R x C) plus a 1 x C row vector broadcast over rows.
  Var add_rowvec(Var a, Var v);
  Var scale(Var a, double s);
  Var matmul(Var a, Var b);
  /// a * b^T
  Var matmul_nt(Var a, Var b);
  Var relu(Var a);
  Var gelu(Var a);
  Var softmax_rows(Var a);
  /// Row-wise layer norm with learnable gain/bias (both 1 x C).
  Var layer_norm(Var a, Var gain, Var bias);
  /// Column sums -> 1 x C.
  Var sum_rows(Var a);
  /// Column means -> 1 x C.
  Var mean_rows(Var a);
  Var slice_cols(Var a, int first, int width);
  Var concat_cols(const std::vector<Var> &parts);
  /// Rows flagged in mask are replaced by the 1 x C vector m.
  Var replace_masked_rows(Var a, const std::vector<uint8_t> &mask, Var m);
  /// Rows scaled to unit L2 norm; an all-zero row stays zero (and gets
  /// zero gradient).
  Var normalize_rows(Var a);
  /// Sum over m of theta[m] * l_powers[m] * h. l_powers must be symmetric
  /// (powers of a Laplacian); theta is 1 x (P+1).
  Var spectral_filter(Var h, const std::vector<Matrix> &l_powers, Var theta);
  /// Mean softmax cross-entropy over rows with mask set; 1 x 1 output.
  /// Throws if the mask selects no rows.
  Var masked_cross_entropy(Var logits, const std::vector<int> &labels,
                           const std::vector<uint8_t> &mask);
  /// Cross-entropy of a single 1 x C logit row.
  Var cross_entropy_logits(Var logits, int label);

  /// Backpropagate from a 1 x 1 loss node.
  void backward(Var loss);

  const Matrix &value(Var v) const { return nodes_[v.id].value; }
  /// Gradient accumulated for v by the last backward(); zero matrix of the
  /// node's shape if nothing flowed into it.
  const Matrix &grad(Var v);

  size_t num_nodes() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    std::function<void()> back;  // empty for leaves
  };

  Var push(Matrix value, bool requires_grad, std::function<void()> back);
  Matrix &grad_buf(int id);
  void accumulate(int id, const Matrix &g);

  std::vector<Node> nodes_;
};

}  // namespace ser::numerics
