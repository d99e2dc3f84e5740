// ser/gcn/model.h

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
#include <vector>

#include "ser/common/checkpoint.h"
#include "ser/numerics/autodiff.h"
#include "ser/numerics/matrix.h"
#include "ser/textgraph/graph.h"

namespace ser::gcn {

// One spectral convolution layer: a degree-P polynomial filter
// p(L) = sum_m theta_m L^m shared across graphs, then a dense projection.
// Unlike a per-eigenmode filter, the polynomial transfers across sentences
// of different lengths, and its vertex-domain form needs no
// eigendecomposition at all.
struct GcnLayer {
  numerics::Matrix theta;   // 1 x (P+1)
  numerics::Matrix weight;  // F_in x F_out
  numerics::Matrix bias;    // 1 x F_out
};

struct GcnConfig {
  int input_dim = 100;
  int hidden_dim = 128;
  int num_classes = 4;
  int poly_degree = 2;  // P
};

// [I, L, L^2, ..., L^P] for the vertex-domain filter.
std::vector<numerics::Matrix> laplacian_powers(const numerics::Matrix &l,
                                               int degree);

// Pre-activation p(L)*H*W + b computed two ways. The vertex path is the
// production one; the spectral path goes through the graph Fourier basis
// U diag(p(lambda)) U^T and exists to cross-check the filter (the two
// must agree to 1e-8).
numerics::Matrix layer_preactivation_vertex(const textgraph::TextGraph &g,
                                            const numerics::Matrix &h,
                                            const GcnLayer &layer);
numerics::Matrix layer_preactivation_spectral(const textgraph::TextGraph &g,
                                              const numerics::Matrix &h,
                                              const GcnLayer &layer);

// ReLU(vertex pre-activation).
numerics::Matrix gcn_layer_forward(const textgraph::TextGraph &g,
                                   const numerics::Matrix &h,
                                   const GcnLayer &layer);

// Column-wise sum over nodes -> 1 x F row.
numerics::Matrix sum_pool(const numerics::Matrix &h);

class GcnModel {
 public:
  // theta starts at (1, 0, ..., 0) so each layer begins as a plain dense
  // layer; weights use scaled uniform fan-in init; biases zero.
  GcnModel(const GcnConfig &cfg, uint64_t seed);

  const GcnConfig &config() const { return cfg_; }
  long long param_count() const;

  GcnLayer &layer1() { return layer1_; }
  GcnLayer &layer2() { return layer2_; }
  numerics::Matrix &fc_weight() { return fc_weight_; }
  numerics::Matrix &fc_bias() { return fc_bias_; }
  const GcnLayer &layer1() const { return layer1_; }
  const GcnLayer &layer2() const { return layer2_; }

  // Canonical parameter order: layer1 theta/weight/bias, layer2 ditto,
  // fc weight/bias. The optimizer, checkpoints and tape leaves all use it.
  std::vector<numerics::Matrix *> parameters();
  std::vector<const numerics::Matrix *> parameters() const;

  struct Prediction {
    numerics::Matrix logits;            // 1 x num_classes
    std::vector<double> probabilities;  // softmax of logits
  };
  Prediction predict(const textgraph::TextGraph &g) const;

  // Builds the differentiable forward + cross-entropy loss on the caller's
  // tape. param_vars receives the parameter leaves in canonical order;
  // l_powers must stay alive until backward() runs.
  numerics::Tape::Var build_loss(
      numerics::Tape &tape, const numerics::Matrix &x,
      const std::vector<numerics::Matrix> &l_powers, int label,
      std::vector<numerics::Tape::Var> *param_vars) const;

  common::Checkpoint to_checkpoint(uint64_t seed) const;
  static GcnModel from_checkpoint(const common::Checkpoint &ckpt);

 private:
  GcnConfig cfg_;
  GcnLayer layer1_, layer2_;
  numerics::Matrix fc_weight_;  // hidden x classes
  numerics::Matrix fc_bias_;    // 1 x classes
};

}  // namespace ser::gcn
