// ser/gcn/model.cc

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

#include "ser/gcn/model.h"

#include <cmath>

#include "ser/common/error.h"
#include "ser/common/rng.h"
#include "ser/numerics/ops.h"

namespace ser::gcn {

std::vector<numerics::Matrix> laplacian_powers(const numerics::Matrix &l,
                                               int degree) {
  if (l.rows() != l.cols())
    throw StructuralError("laplacian_powers: L must be square");
  if (degree < 0) throw StructuralError("laplacian_powers: degree < 0");
  std::vector<numerics::Matrix> powers;
  powers.push_back(numerics::Matrix::identity(l.rows()));
  for (int m = 1; m <= degree; ++m)
    powers.push_back(numerics::matmul(powers.back(), l));
  return powers;
}

numerics::Matrix layer_preactivation_vertex(const textgraph::TextGraph &g,
                                            const numerics::Matrix &h,
                                            const GcnLayer &layer) {
  if (h.rows() != g.n)
    throw StructuralError("gcn layer: H rows != graph size");
  if (h.cols() != layer.weight.rows())
    throw StructuralError("gcn layer: H cols != weight rows");
  const int degree = layer.theta.cols() - 1;
  const auto powers = laplacian_powers(g.l, degree);
  numerics::Matrix filtered(h.rows(), h.cols());
  for (int m = 0; m <= degree; ++m)
    numerics::add_in_place(
        filtered,
        numerics::scale(numerics::matmul(powers[m], h), layer.theta(0, m)));
  numerics::Matrix out = numerics::matmul(filtered, layer.weight);
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < out.cols(); ++j) out(i, j) += layer.bias(0, j);
  return out;
}

numerics::Matrix layer_preactivation_spectral(const textgraph::TextGraph &g,
                                              const numerics::Matrix &h,
                                              const GcnLayer &layer) {
  if (h.rows() != g.n)
    throw StructuralError("gcn layer: H rows != graph size");
  if (h.cols() != layer.weight.rows())
    throw StructuralError("gcn layer: H cols != weight rows");
  const int degree = layer.theta.cols() - 1;
  const numerics::Matrix &u = g.basis.eigenvectors;
  // diag(p(lambda)) applied between U^T and U.
  numerics::Matrix spectral = numerics::matmul_tn(u, h);  // U^T H
  for (int i = 0; i < spectral.rows(); ++i) {
    const double lambda = g.basis.eigenvalues[i];
    double p = 0.0, pow_l = 1.0;
    for (int m = 0; m <= degree; ++m) {
      p += layer.theta(0, m) * pow_l;
      pow_l *= lambda;
    }
    for (int j = 0; j < spectral.cols(); ++j) spectral(i, j) *= p;
  }
  numerics::Matrix filtered = numerics::matmul(u, spectral);
  numerics::Matrix out = numerics::matmul(filtered, layer.weight);
  for (int i = 0; i < out.rows(); ++i)
    for (int j = 0; j < out.cols(); ++j) out(i, j) += layer.bias(0, j);
  return out;
}

numerics::Matrix gcn_layer_forward(const textgraph::TextGraph &g,
                                   const numerics::Matrix &h,
                                   const GcnLayer &layer) {
  numerics::Matrix out = layer_preactivation_vertex(g, h, layer);
  for (long i = 0; i < out.size(); ++i)
    if (out.data()[i] < 0.0) out.data()[i] = 0.0;
  return out;
}

numerics::Matrix sum_pool(const numerics::Matrix &h) {
  if (h.rows() < 1) throw StructuralError("sum_pool: empty input");
  numerics::Matrix out(1, h.cols());
  for (int i = 0; i < h.rows(); ++i)
    for (int j = 0; j < h.cols(); ++j) out(0, j) += h(i, j);
  return out;
}

namespace {

numerics::Matrix uniform_fan_in(common::Rng &rng, int rows, int cols) {
  numerics::Matrix m(rows, cols);
  const double bound = 1.0 / std::sqrt(static_cast<double>(rows));
  for (long i = 0; i < m.size(); ++i)
    m.data()[i] = rng.uniform(-bound, bound);
  return m;
}

GcnLayer init_layer(common::Rng &rng, int fan_in, int fan_out, int degree) {
  GcnLayer layer;
  layer.theta = numerics::Matrix(1, degree + 1);
  layer.theta(0, 0) = 1.0;
  layer.weight = uniform_fan_in(rng, fan_in, fan_out);
  layer.bias = numerics::Matrix(1, fan_out);
  return layer;
}

}  // namespace

GcnModel::GcnModel(const GcnConfig &cfg, uint64_t seed) : cfg_(cfg) {
  if (cfg.input_dim < 1 || cfg.hidden_dim < 1 || cfg.num_classes < 2 ||
      cfg.poly_degree < 0)
    throw StructuralError("GcnModel: bad config");
  common::Rng rng(seed);
  layer1_ = init_layer(rng, cfg.input_dim, cfg.hidden_dim, cfg.poly_degree);
  layer2_ = init_layer(rng, cfg.hidden_dim, cfg.hidden_dim, cfg.poly_degree);
  fc_weight_ = uniform_fan_in(rng, cfg.hidden_dim, cfg.num_classes);
  fc_bias_ = numerics::Matrix(1, cfg.num_classes);
}

long long GcnModel::param_count() const {
  long long total = 0;
  for (const numerics::Matrix *p : parameters()) total += p->size();
  return total;
}

std::vector<numerics::Matrix *> GcnModel::parameters() {
  return {&layer1_.theta, &layer1_.weight, &layer1_.bias,
          &layer2_.theta, &layer2_.weight, &layer2_.bias,
          &fc_weight_,    &fc_bias_};
}

std::vector<const numerics::Matrix *> GcnModel::parameters() const {
  return {&layer1_.theta, &layer1_.weight, &layer1_.bias,
          &layer2_.theta, &layer2_.weight, &layer2_.bias,
          &fc_weight_,    &fc_bias_};
}

GcnModel::Prediction GcnModel::predict(const textgraph::TextGraph &g) const {
  const numerics::Matrix h1 = gcn_layer_forward(g, g.x, layer1_);
  const numerics::Matrix h2 = gcn_layer_forward(g, h1, layer2_);
  const numerics::Matrix pooled = sum_pool(h2);
  numerics::Matrix logits = numerics::matmul(pooled, fc_weight_);
  for (int j = 0; j < logits.cols(); ++j) logits(0, j) += fc_bias_(0, j);
  Prediction out;
  out.probabilities = numerics::softmax(logits.row(0));
  out.logits = std::move(logits);
  return out;
}

numerics::Tape::Var GcnModel::build_loss(
    numerics::Tape &tape, const numerics::Matrix &x,
    const std::vector<numerics::Matrix> &l_powers, int label,
    std::vector<numerics::Tape::Var> *param_vars) const {
  using Var = numerics::Tape::Var;
  std::vector<Var> vars;
  for (const numerics::Matrix *p : parameters())
    vars.push_back(tape.leaf(*p, true));
  const Var x_in = tape.leaf(x, false);

  auto conv = [&](Var h, Var theta, Var weight, Var bias) {
    const Var filtered = tape.spectral_filter(h, l_powers, theta);
    return tape.relu(
        tape.add_rowvec(tape.matmul(filtered, weight), bias));
  };
  const Var h1 = conv(x_in, vars[0], vars[1], vars[2]);
  const Var h2 = conv(h1, vars[3], vars[4], vars[5]);
  const Var pooled = tape.sum_rows(h2);
  const Var logits =
      tape.add_rowvec(tape.matmul(pooled, vars[6]), vars[7]);
  if (param_vars) *param_vars = vars;
  return tape.cross_entropy_logits(logits, label);
}

common::Checkpoint GcnModel::to_checkpoint(uint64_t seed) const {
  common::Checkpoint ckpt;
  ckpt.model_kind = "gcn";
  ckpt.meta.set_int("input_dim", cfg_.input_dim);
  ckpt.meta.set_int("hidden_dim", cfg_.hidden_dim);
  ckpt.meta.set_int("num_classes", cfg_.num_classes);
  ckpt.meta.set_int("poly_degree", cfg_.poly_degree);
  ckpt.meta.set_int("seed", static_cast<long long>(seed));
  ckpt.add("layer1.theta", layer1_.theta);
  ckpt.add("layer1.weight", layer1_.weight);
  ckpt.add("layer1.bias", layer1_.bias);
  ckpt.add("layer2.theta", layer2_.theta);
  ckpt.add("layer2.weight", layer2_.weight);
  ckpt.add("layer2.bias", layer2_.bias);
  ckpt.add("fc.weight", fc_weight_);
  ckpt.add("fc.bias", fc_bias_);
  return ckpt;
}

GcnModel GcnModel::from_checkpoint(const common::Checkpoint &ckpt) {
  if (ckpt.model_kind != "gcn")
    throw DataError("GcnModel: checkpoint kind is \"" + ckpt.model_kind +
                    "\", expected \"gcn\"");
  GcnConfig cfg;
  cfg.input_dim = static_cast<int>(ckpt.meta.get_int("input_dim"));
  cfg.hidden_dim = static_cast<int>(ckpt.meta.get_int("hidden_dim"));
  cfg.num_classes = static_cast<int>(ckpt.meta.get_int("num_classes"));
  cfg.poly_degree = static_cast<int>(ckpt.meta.get_int("poly_degree"));
  GcnModel model(cfg, 0);
  model.layer1_.theta = ckpt.tensor("layer1.theta");
  model.layer1_.weight = ckpt.tensor("layer1.weight");
  model.layer1_.bias = ckpt.tensor("layer1.bias");
  model.layer2_.theta = ckpt.tensor("layer2.theta");
  model.layer2_.weight = ckpt.tensor("layer2.weight");
  model.layer2_.bias = ckpt.tensor("layer2.bias");
  model.fc_weight_ = ckpt.tensor("fc.weight");
  model.fc_bias_ = ckpt.tensor("fc.bias");
  const GcnModel reference(cfg, 0);
  const auto expect = reference.parameters();
  const auto actual = model.parameters();
  for (size_t i = 0; i < actual.size(); ++i)
    if (!actual[i]->same_shape(*expect[i]))
      throw DataError("GcnModel: checkpoint tensor shapes do not match the "
                      "declared dims");
  for (const numerics::Matrix *p : model.parameters())
    if (!numerics::all_finite(*p))
      throw NumericError("GcnModel: non-finite checkpoint parameters");
  return model;
}

}  // namespace ser::gcn
