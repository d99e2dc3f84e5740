// ser/hubert/model.cc

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

#include "ser/hubert/model.h"

#include <cmath>
#include <string>
#include <utility>

#include "ser/common/error.h"
#include "ser/common/parallel.h"
#include "ser/common/rng.h"
#include "ser/datasets/emotion.h"
#include "ser/numerics/ops.h"

namespace ser::hubert {

namespace {

constexpr double kLayerNormEps = 1e-5;  // matches the tape op
constexpr double kInvSqrt2 = 0.7071067811865475244;

numerics::Matrix uniform_fan_in(common::Rng &rng, int rows, int cols) {
  numerics::Matrix m(rows, cols);
  const double bound = 1.0 / std::sqrt(static_cast<double>(rows));
  for (long i = 0; i < m.size(); ++i)
    m.data()[i] = rng.uniform(-bound, bound);
  return m;
}

void add_rowvec_ip(numerics::Matrix &m, const numerics::Matrix &v) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m(i, j) += v(0, j);
}

numerics::Matrix layer_norm_mat(const numerics::Matrix &x,
                                const numerics::Matrix &gain,
                                const numerics::Matrix &bias) {
  numerics::Matrix out(x.rows(), x.cols());
  const int cols = x.cols();
  for (int i = 0; i < x.rows(); ++i) {
    double mu = 0.0;
    for (int j = 0; j < cols; ++j) mu += x(i, j);
    mu /= cols;
    double var = 0.0;
    for (int j = 0; j < cols; ++j) {
      const double d = x(i, j) - mu;
      var += d * d;
    }
    var /= cols;
    const double inv_sigma = 1.0 / std::sqrt(var + kLayerNormEps);
    for (int j = 0; j < cols; ++j)
      out(i, j) = gain(0, j) * (x(i, j) - mu) * inv_sigma + bias(0, j);
  }
  return out;
}

void gelu_ip(numerics::Matrix &m) {
  for (long i = 0; i < m.size(); ++i) {
    const double v = m.data()[i];
    m.data()[i] = 0.5 * v * (1.0 + std::erf(v * kInvSqrt2));
  }
}

void softmax_rows_ip(numerics::Matrix &m) {
  for (int i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    const std::vector<double> p = numerics::softmax(r);
    for (int j = 0; j < m.cols(); ++j) r[j] = p[j];
  }
}

numerics::Matrix copy_cols(const numerics::Matrix &m, int first, int width) {
  numerics::Matrix out(m.rows(), width);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < width; ++j) out(i, j) = m(i, first + j);
  return out;
}

void normalize_rows_ip(numerics::Matrix &m) {
  for (int i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    double norm = 0.0;
    for (double v : r) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;  // zero row keeps cosine 0
    for (double &v : r) v /= norm;
  }
}

void validate_codebook(const EncoderConfig &cfg, const UnitCodebook &cb) {
  if (cb.k < 1) throw StructuralError("HubertModel: codebook k must be >= 1");
  if (cb.centroids.rows() != cb.k)
    throw StructuralError("HubertModel: centroids rows != k");
  if (cb.unit_embeddings.rows() != cb.k ||
      cb.unit_embeddings.cols() != cfg.proj_dim)
    throw StructuralError(
        "HubertModel: unit embeddings must be k x proj_dim");
}

}  // namespace

numerics::Matrix sinusoidal_encoding(int num_frames, int dim) {
  if (num_frames < 1 || dim < 1)
    throw StructuralError("sinusoidal_encoding: bad shape");
  numerics::Matrix pe(num_frames, dim);
  for (int t = 0; t < num_frames; ++t) {
    for (int j = 0; j + 1 < dim; j += 2) {
      const double rate = std::pow(10000.0, static_cast<double>(j) / dim);
      pe(t, j) = std::sin(t / rate);
      pe(t, j + 1) = std::cos(t / rate);
    }
    if (dim % 2 == 1) {
      const double rate = std::pow(10000.0, static_cast<double>(dim - 1) / dim);
      pe(t, dim - 1) = std::sin(t / rate);
    }
  }
  return pe;
}

int refine_layer_index(int layers) {
  if (layers < 1)
    throw StructuralError("refine_layer_index: need at least one layer");
  return (layers + 1) / 2;
}

HubertModel::HubertModel(const EncoderConfig &cfg, UnitCodebook codebook,
                         uint64_t seed)
    : cfg_(cfg), codebook_(std::move(codebook)) {
  if (cfg.feat_dim < 1 || cfg.model_dim < 1 || cfg.layers < 0 ||
      cfg.heads < 1 || cfg.ffn_dim < 1 || cfg.proj_dim < 1 ||
      cfg.temperature <= 0.0)
    throw StructuralError("HubertModel: bad config");
  if (cfg.model_dim % cfg.heads != 0)
    throw StructuralError("HubertModel: model_dim must divide by heads");
  validate_codebook(cfg_, codebook_);

  common::Rng rng(seed);
  in_w_ = uniform_fan_in(rng, cfg.feat_dim, cfg.model_dim);
  in_b_ = numerics::Matrix(1, cfg.model_dim);
  mask_vec_ = uniform_fan_in(rng, 1, cfg.model_dim);
  layers_.resize(cfg.layers);
  for (EncoderLayerParams &l : layers_) {
    l.wq = uniform_fan_in(rng, cfg.model_dim, cfg.model_dim);
    l.bq = numerics::Matrix(1, cfg.model_dim);
    l.wk = uniform_fan_in(rng, cfg.model_dim, cfg.model_dim);
    l.bk = numerics::Matrix(1, cfg.model_dim);
    l.wv = uniform_fan_in(rng, cfg.model_dim, cfg.model_dim);
    l.bv = numerics::Matrix(1, cfg.model_dim);
    l.wo = uniform_fan_in(rng, cfg.model_dim, cfg.model_dim);
    l.bo = numerics::Matrix(1, cfg.model_dim);
    l.ln1_gain = numerics::Matrix(1, cfg.model_dim, 1.0);
    l.ln1_bias = numerics::Matrix(1, cfg.model_dim);
    l.ffn_w1 = uniform_fan_in(rng, cfg.model_dim, cfg.ffn_dim);
    l.ffn_b1 = numerics::Matrix(1, cfg.ffn_dim);
    l.ffn_w2 = uniform_fan_in(rng, cfg.ffn_dim, cfg.model_dim);
    l.ffn_b2 = numerics::Matrix(1, cfg.model_dim);
    l.ln2_gain = numerics::Matrix(1, cfg.model_dim, 1.0);
    l.ln2_bias = numerics::Matrix(1, cfg.model_dim);
  }
  out_w_ = uniform_fan_in(rng, cfg.model_dim, cfg.proj_dim);
  out_b_ = numerics::Matrix(1, cfg.proj_dim);
  // The head starts at zero so an untrained classifier emits uniform
  // probabilities.
  cls_w_ = numerics::Matrix(cfg.model_dim, datasets::kNumEmotions);
  cls_b_ = numerics::Matrix(1, datasets::kNumEmotions);
}

void HubertModel::set_codebook(UnitCodebook codebook) {
  validate_codebook(cfg_, codebook);
  codebook_ = std::move(codebook);
}

long long HubertModel::param_count() const {
  long long total = in_w_.size() + in_b_.size() + mask_vec_.size();
  for (const EncoderLayerParams &l : layers_)
    total += l.wq.size() + l.bq.size() + l.wk.size() + l.bk.size() +
             l.wv.size() + l.bv.size() + l.wo.size() + l.bo.size() +
             l.ln1_gain.size() + l.ln1_bias.size() + l.ffn_w1.size() +
             l.ffn_b1.size() + l.ffn_w2.size() + l.ffn_b2.size() +
             l.ln2_gain.size() + l.ln2_bias.size();
  total += out_w_.size() + out_b_.size() + codebook_.unit_embeddings.size();
  total += cls_w_.size() + cls_b_.size();
  return total;
}

std::vector<numerics::Matrix *> HubertModel::pretrain_parameters() {
  std::vector<numerics::Matrix *> out = {&in_w_, &in_b_, &mask_vec_};
  for (EncoderLayerParams &l : layers_) {
    out.insert(out.end(),
               {&l.wq, &l.bq, &l.wk, &l.bk, &l.wv, &l.bv, &l.wo, &l.bo,
                &l.ln1_gain, &l.ln1_bias, &l.ffn_w1, &l.ffn_b1, &l.ffn_w2,
                &l.ffn_b2, &l.ln2_gain, &l.ln2_bias});
  }
  out.push_back(&out_w_);
  out.push_back(&out_b_);
  out.push_back(&codebook_.unit_embeddings);
  return out;
}

std::vector<numerics::Matrix *> HubertModel::finetune_parameters() {
  std::vector<numerics::Matrix *> out = {&in_w_, &in_b_};
  for (EncoderLayerParams &l : layers_) {
    out.insert(out.end(),
               {&l.wq, &l.bq, &l.wk, &l.bk, &l.wv, &l.bv, &l.wo, &l.bo,
                &l.ln1_gain, &l.ln1_bias, &l.ffn_w1, &l.ffn_b1, &l.ffn_w2,
                &l.ffn_b2, &l.ln2_gain, &l.ln2_bias});
  }
  out.push_back(&cls_w_);
  out.push_back(&cls_b_);
  return out;
}

std::vector<const numerics::Matrix *> HubertModel::all_tensors() const {
  std::vector<const numerics::Matrix *> out = {&in_w_, &in_b_, &mask_vec_};
  for (const EncoderLayerParams &l : layers_) {
    out.insert(out.end(),
               {&l.wq, &l.bq, &l.wk, &l.bk, &l.wv, &l.bv, &l.wo, &l.bo,
                &l.ln1_gain, &l.ln1_bias, &l.ffn_w1, &l.ffn_b1, &l.ffn_w2,
                &l.ffn_b2, &l.ln2_gain, &l.ln2_bias});
  }
  out.insert(out.end(), {&out_w_, &out_b_, &codebook_.centroids,
                         &codebook_.unit_embeddings, &cls_w_, &cls_b_});
  return out;
}

HubertModel::Encoded HubertModel::encode(const dsp::FeatureMatrix &features,
                                         const std::vector<uint8_t> *mask,
                                         bool capture_attention) const {
  if (features.dim() != cfg_.feat_dim)
    throw DataError("encode: feature dim " + std::to_string(features.dim()) +
                    " does not match input projection " +
                    std::to_string(cfg_.feat_dim));
  const int t = features.frames();
  if (t < 1) throw DataError("encode: no frames");
  if (mask && static_cast<int>(mask->size()) != t)
    throw StructuralError("encode: mask length != frame count");

  Encoded out;
  numerics::Matrix h = numerics::matmul(features.values, in_w_);
  add_rowvec_ip(h, in_b_);
  if (mask) {
    for (int i = 0; i < t; ++i) {
      if (!(*mask)[i]) continue;
      for (int j = 0; j < cfg_.model_dim; ++j) h(i, j) = mask_vec_(0, j);
    }
  }
  if (cfg_.positional_encoding)
    numerics::add_in_place(h, sinusoidal_encoding(t, cfg_.model_dim));
  out.states.push_back(h);
  if (capture_attention) out.attention.resize(layers_.size());

  const int head_dim = cfg_.model_dim / cfg_.heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));
  for (size_t li = 0; li < layers_.size(); ++li) {
    const EncoderLayerParams &l = layers_[li];
    numerics::Matrix q = numerics::matmul(h, l.wq);
    add_rowvec_ip(q, l.bq);
    numerics::Matrix k = numerics::matmul(h, l.wk);
    add_rowvec_ip(k, l.bk);
    numerics::Matrix v = numerics::matmul(h, l.wv);
    add_rowvec_ip(v, l.bv);
    numerics::Matrix cat(t, cfg_.model_dim);
    for (int hi = 0; hi < cfg_.heads; ++hi) {
      const int first = hi * head_dim;
      const numerics::Matrix qi = copy_cols(q, first, head_dim);
      const numerics::Matrix ki = copy_cols(k, first, head_dim);
      const numerics::Matrix vi = copy_cols(v, first, head_dim);
      numerics::Matrix weights =
          numerics::scale(numerics::matmul_nt(qi, ki), scale);
      softmax_rows_ip(weights);
      const numerics::Matrix oi = numerics::matmul(weights, vi);
      for (int r = 0; r < t; ++r)
        for (int c = 0; c < head_dim; ++c) cat(r, first + c) = oi(r, c);
      if (capture_attention) out.attention[li].push_back(std::move(weights));
    }
    numerics::Matrix attn = numerics::matmul(cat, l.wo);
    add_rowvec_ip(attn, l.bo);
    h = layer_norm_mat(numerics::add(h, attn), l.ln1_gain, l.ln1_bias);
    numerics::Matrix f1 = numerics::matmul(h, l.ffn_w1);
    add_rowvec_ip(f1, l.ffn_b1);
    gelu_ip(f1);
    numerics::Matrix f2 = numerics::matmul(f1, l.ffn_w2);
    add_rowvec_ip(f2, l.ffn_b2);
    h = layer_norm_mat(numerics::add(h, f2), l.ln2_gain, l.ln2_bias);
    out.states.push_back(h);
  }
  return out;
}

numerics::Matrix HubertModel::pretrain_logits(
    const numerics::Matrix &final_state) const {
  if (final_state.cols() != cfg_.model_dim)
    throw StructuralError("pretrain_logits: state dim != model_dim");
  numerics::Matrix proj = numerics::matmul(final_state, out_w_);
  add_rowvec_ip(proj, out_b_);
  normalize_rows_ip(proj);
  numerics::Matrix emb = codebook_.unit_embeddings;
  normalize_rows_ip(emb);
  return numerics::scale(numerics::matmul_nt(proj, emb),
                         1.0 / cfg_.temperature);
}

HubertModel::Prediction HubertModel::predict(
    const dsp::FeatureMatrix &features) const {
  const Encoded enc = encode(features);
  const numerics::Matrix &last = enc.states.back();
  numerics::Matrix pooled(1, cfg_.model_dim);
  for (int i = 0; i < last.rows(); ++i)
    for (int j = 0; j < last.cols(); ++j) pooled(0, j) += last(i, j);
  for (int j = 0; j < pooled.cols(); ++j) pooled(0, j) /= last.rows();
  numerics::Matrix logits = numerics::matmul(pooled, cls_w_);
  add_rowvec_ip(logits, cls_b_);
  Prediction out;
  out.probabilities = numerics::softmax(logits.row(0));
  out.logits = std::move(logits);
  return out;
}

namespace {

struct LayerLeaves {
  numerics::Tape::Var wq, bq, wk, bk, wv, bv, wo, bo;
  numerics::Tape::Var ln1_gain, ln1_bias;
  numerics::Tape::Var ffn_w1, ffn_b1, ffn_w2, ffn_b2;
  numerics::Tape::Var ln2_gain, ln2_bias;
};

LayerLeaves push_layer_leaves(numerics::Tape &tape,
                              const EncoderLayerParams &l,
                              std::vector<numerics::Tape::Var> &order) {
  LayerLeaves v;
  v.wq = tape.leaf(l.wq, true);
  v.bq = tape.leaf(l.bq, true);
  v.wk = tape.leaf(l.wk, true);
  v.bk = tape.leaf(l.bk, true);
  v.wv = tape.leaf(l.wv, true);
  v.bv = tape.leaf(l.bv, true);
  v.wo = tape.leaf(l.wo, true);
  v.bo = tape.leaf(l.bo, true);
  v.ln1_gain = tape.leaf(l.ln1_gain, true);
  v.ln1_bias = tape.leaf(l.ln1_bias, true);
  v.ffn_w1 = tape.leaf(l.ffn_w1, true);
  v.ffn_b1 = tape.leaf(l.ffn_b1, true);
  v.ffn_w2 = tape.leaf(l.ffn_w2, true);
  v.ffn_b2 = tape.leaf(l.ffn_b2, true);
  v.ln2_gain = tape.leaf(l.ln2_gain, true);
  v.ln2_bias = tape.leaf(l.ln2_bias, true);
  order.insert(order.end(),
               {v.wq, v.bq, v.wk, v.bk, v.wv, v.bv, v.wo, v.bo, v.ln1_gain,
                v.ln1_bias, v.ffn_w1, v.ffn_b1, v.ffn_w2, v.ffn_b2,
                v.ln2_gain, v.ln2_bias});
  return v;
}

numerics::Tape::Var tape_encoder_stack(numerics::Tape &tape,
                                       const EncoderConfig &cfg,
                                       numerics::Tape::Var h,
                                       const std::vector<LayerLeaves> &layers) {
  using Var = numerics::Tape::Var;
  const int head_dim = cfg.model_dim / cfg.heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));
  for (const LayerLeaves &l : layers) {
    const Var q = tape.add_rowvec(tape.matmul(h, l.wq), l.bq);
    const Var k = tape.add_rowvec(tape.matmul(h, l.wk), l.bk);
    const Var v = tape.add_rowvec(tape.matmul(h, l.wv), l.bv);
    std::vector<Var> heads;
    for (int hi = 0; hi < cfg.heads; ++hi) {
      const int first = hi * head_dim;
      const Var qi = tape.slice_cols(q, first, head_dim);
      const Var ki = tape.slice_cols(k, first, head_dim);
      const Var vi = tape.slice_cols(v, first, head_dim);
      const Var weights =
          tape.softmax_rows(tape.scale(tape.matmul_nt(qi, ki), scale));
      heads.push_back(tape.matmul(weights, vi));
    }
    const Var attn =
        tape.add_rowvec(tape.matmul(tape.concat_cols(heads), l.wo), l.bo);
    h = tape.layer_norm(tape.add(h, attn), l.ln1_gain, l.ln1_bias);
    const Var f1 =
        tape.gelu(tape.add_rowvec(tape.matmul(h, l.ffn_w1), l.ffn_b1));
    const Var f2 = tape.add_rowvec(tape.matmul(f1, l.ffn_w2), l.ffn_b2);
    h = tape.layer_norm(tape.add(h, f2), l.ln2_gain, l.ln2_bias);
  }
  return h;
}

}  // namespace

numerics::Tape::Var HubertModel::build_pretrain_loss(
    numerics::Tape &tape, const dsp::FeatureMatrix &features,
    const std::vector<int> &labels, const std::vector<uint8_t> &mask,
    std::vector<numerics::Tape::Var> *param_vars) const {
  using Var = numerics::Tape::Var;
  const int t = features.frames();
  if (features.dim() != cfg_.feat_dim)
    throw DataError("pretrain loss: feature dim mismatch");
  if (static_cast<int>(labels.size()) != t ||
      static_cast<int>(mask.size()) != t)
    throw StructuralError("pretrain loss: labels/mask length != frames");
  for (int u : labels)
    if (u < 0 || u >= codebook_.k)
      throw DataError("pretrain loss: unit label " + std::to_string(u) +
                      " outside codebook of " + std::to_string(codebook_.k));

  std::vector<Var> order;
  const Var in_w = tape.leaf(in_w_, true);
  const Var in_b = tape.leaf(in_b_, true);
  const Var mask_vec = tape.leaf(mask_vec_, true);
  order.insert(order.end(), {in_w, in_b, mask_vec});
  std::vector<LayerLeaves> layer_vars;
  for (const EncoderLayerParams &l : layers_)
    layer_vars.push_back(push_layer_leaves(tape, l, order));
  const Var out_w = tape.leaf(out_w_, true);
  const Var out_b = tape.leaf(out_b_, true);
  const Var emb = tape.leaf(codebook_.unit_embeddings, true);
  order.insert(order.end(), {out_w, out_b, emb});

  const Var x = tape.leaf(features.values, false);
  Var h = tape.add_rowvec(tape.matmul(x, in_w), in_b);
  h = tape.replace_masked_rows(h, mask, mask_vec);
  if (cfg_.positional_encoding)
    h = tape.add(h, tape.leaf(sinusoidal_encoding(t, cfg_.model_dim), false));
  h = tape_encoder_stack(tape, cfg_, h, layer_vars);

  const Var proj = tape.add_rowvec(tape.matmul(h, out_w), out_b);
  const Var logits =
      tape.scale(tape.matmul_nt(tape.normalize_rows(proj),
                                tape.normalize_rows(emb)),
                 1.0 / cfg_.temperature);
  if (param_vars) *param_vars = order;
  return tape.masked_cross_entropy(logits, labels, mask);
}

numerics::Tape::Var HubertModel::build_finetune_loss(
    numerics::Tape &tape, const dsp::FeatureMatrix &features, int label,
    std::vector<numerics::Tape::Var> *param_vars) const {
  using Var = numerics::Tape::Var;
  const int t = features.frames();
  if (features.dim() != cfg_.feat_dim)
    throw DataError("finetune loss: feature dim mismatch");
  if (label < 0 || label >= datasets::kNumEmotions)
    throw DataError("finetune loss: label " + std::to_string(label) +
                    " outside the emotion set");

  std::vector<Var> order;
  const Var in_w = tape.leaf(in_w_, true);
  const Var in_b = tape.leaf(in_b_, true);
  order.insert(order.end(), {in_w, in_b});
  std::vector<LayerLeaves> layer_vars;
  for (const EncoderLayerParams &l : layers_)
    layer_vars.push_back(push_layer_leaves(tape, l, order));
  const Var cls_w = tape.leaf(cls_w_, true);
  const Var cls_b = tape.leaf(cls_b_, true);
  order.insert(order.end(), {cls_w, cls_b});

  const Var x = tape.leaf(features.values, false);
  Var h = tape.add_rowvec(tape.matmul(x, in_w), in_b);
  if (cfg_.positional_encoding)
    h = tape.add(h, tape.leaf(sinusoidal_encoding(t, cfg_.model_dim), false));
  h = tape_encoder_stack(tape, cfg_, h, layer_vars);

  const Var pooled = tape.mean_rows(h);
  const Var logits = tape.add_rowvec(tape.matmul(pooled, cls_w), cls_b);
  if (param_vars) *param_vars = order;
  return tape.cross_entropy_logits(logits, label);
}

common::Checkpoint HubertModel::to_checkpoint(const std::string &kind,
                                              uint64_t seed) const {
  if (kind != "hubert_pretrain" && kind != "hubert_classifier")
    throw StructuralError("HubertModel: unknown checkpoint kind \"" + kind +
                          "\"");
  common::Checkpoint ckpt;
  ckpt.model_kind = kind;
  ckpt.meta.set_int("feat_dim", cfg_.feat_dim);
  ckpt.meta.set_int("model_dim", cfg_.model_dim);
  ckpt.meta.set_int("layers", cfg_.layers);
  ckpt.meta.set_int("heads", cfg_.heads);
  ckpt.meta.set_int("ffn_dim", cfg_.ffn_dim);
  ckpt.meta.set_int("proj_dim", cfg_.proj_dim);
  ckpt.meta.set_double("temperature", cfg_.temperature);
  ckpt.meta.set_bool("positional_encoding", cfg_.positional_encoding);
  ckpt.meta.set_int("k", codebook_.k);
  ckpt.meta.set_int("centroid_dim", codebook_.centroids.cols());
  ckpt.meta.set_int("seed", static_cast<long long>(seed));
  ckpt.add("in.weight", in_w_);
  ckpt.add("in.bias", in_b_);
  ckpt.add("mask.vector", mask_vec_);
  for (size_t i = 0; i < layers_.size(); ++i) {
    const EncoderLayerParams &l = layers_[i];
    const std::string p = "enc" + std::to_string(i + 1) + ".";
    ckpt.add(p + "wq", l.wq);
    ckpt.add(p + "bq", l.bq);
    ckpt.add(p + "wk", l.wk);
    ckpt.add(p + "bk", l.bk);
    ckpt.add(p + "wv", l.wv);
    ckpt.add(p + "bv", l.bv);
    ckpt.add(p + "wo", l.wo);
    ckpt.add(p + "bo", l.bo);
    ckpt.add(p + "ln1_gain", l.ln1_gain);
    ckpt.add(p + "ln1_bias", l.ln1_bias);
    ckpt.add(p + "ffn_w1", l.ffn_w1);
    ckpt.add(p + "ffn_b1", l.ffn_b1);
    ckpt.add(p + "ffn_w2", l.ffn_w2);
    ckpt.add(p + "ffn_b2", l.ffn_b2);
    ckpt.add(p + "ln2_gain", l.ln2_gain);
    ckpt.add(p + "ln2_bias", l.ln2_bias);
  }
  ckpt.add("out.weight", out_w_);
  ckpt.add("out.bias", out_b_);
  ckpt.add("units.centroids", codebook_.centroids, false);
  ckpt.add("units.embeddings", codebook_.unit_embeddings);
  ckpt.add("cls.weight", cls_w_);
  ckpt.add("cls.bias", cls_b_);
  return ckpt;
}

HubertModel HubertModel::from_checkpoint(const common::Checkpoint &ckpt) {
  if (ckpt.model_kind != "hubert_pretrain" &&
      ckpt.model_kind != "hubert_classifier")
    throw DataError("HubertModel: checkpoint kind is \"" + ckpt.model_kind +
                    "\", expected hubert_pretrain or hubert_classifier");
  EncoderConfig cfg;
  cfg.feat_dim = static_cast<int>(ckpt.meta.get_int("feat_dim"));
  cfg.model_dim = static_cast<int>(ckpt.meta.get_int("model_dim"));
  cfg.layers = static_cast<int>(ckpt.meta.get_int("layers"));
  cfg.heads = static_cast<int>(ckpt.meta.get_int("heads"));
  cfg.ffn_dim = static_cast<int>(ckpt.meta.get_int("ffn_dim"));
  cfg.proj_dim = static_cast<int>(ckpt.meta.get_int("proj_dim"));
  cfg.temperature = ckpt.meta.get_double("temperature");
  cfg.positional_encoding = ckpt.meta.get_bool("positional_encoding");
  UnitCodebook cb;
  cb.k = static_cast<int>(ckpt.meta.get_int("k"));
  cb.centroids = ckpt.tensor("units.centroids");
  cb.unit_embeddings = ckpt.tensor("units.embeddings");
  if (cb.centroids.cols() !=
      static_cast<int>(ckpt.meta.get_int("centroid_dim")))
    throw DataError("HubertModel: centroid dim does not match metadata");

  HubertModel model(cfg, std::move(cb), 0);
  model.in_w_ = ckpt.tensor("in.weight");
  model.in_b_ = ckpt.tensor("in.bias");
  model.mask_vec_ = ckpt.tensor("mask.vector");
  for (size_t i = 0; i < model.layers_.size(); ++i) {
    EncoderLayerParams &l = model.layers_[i];
    const std::string p = "enc" + std::to_string(i + 1) + ".";
    l.wq = ckpt.tensor(p + "wq");
    l.bq = ckpt.tensor(p + "bq");
    l.wk = ckpt.tensor(p + "wk");
    l.bk = ckpt.tensor(p + "bk");
    l.wv = ckpt.tensor(p + "wv");
    l.bv = ckpt.tensor(p + "bv");
    l.wo = ckpt.tensor(p + "wo");
    l.bo = ckpt.tensor(p + "bo");
    l.ln1_gain = ckpt.tensor(p + "ln1_gain");
    l.ln1_bias = ckpt.tensor(p + "ln1_bias");
    l.ffn_w1 = ckpt.tensor(p + "ffn_w1");
    l.ffn_b1 = ckpt.tensor(p + "ffn_b1");
    l.ffn_w2 = ckpt.tensor(p + "ffn_w2");
    l.ffn_b2 = ckpt.tensor(p + "ffn_b2");
    l.ln2_gain = ckpt.tensor(p + "ln2_gain");
    l.ln2_bias = ckpt.tensor(p + "ln2_bias");
  }
  model.out_w_ = ckpt.tensor("out.weight");
  model.out_b_ = ckpt.tensor("out.bias");
  model.cls_w_ = ckpt.tensor("cls.weight");
  model.cls_b_ = ckpt.tensor("cls.bias");

  const HubertModel reference(cfg, model.codebook_, 0);
  const auto expect = reference.all_tensors();
  const auto actual = model.all_tensors();
  for (size_t i = 0; i < actual.size(); ++i)
    if (!actual[i]->same_shape(*expect[i]))
      throw DataError(
          "HubertModel: checkpoint tensor shapes do not match the declared "
          "dims");
  for (const numerics::Matrix *t : actual)
    if (!numerics::all_finite(*t))
      throw NumericError("HubertModel: non-finite checkpoint parameters");
  return model;
}

UnitDiscovery refine_units(const HubertModel &model,
                           const std::vector<dsp::FeatureMatrix> &features,
                           int k, uint64_t seed) {
  const int mid = refine_layer_index(model.config().layers);
  std::vector<dsp::FeatureMatrix> mids(features.size());
  common::parallel_for(static_cast<int>(features.size()), [&](int i) {
    HubertModel::Encoded enc = model.encode(features[i]);
    mids[i].values = std::move(enc.states[mid]);
  });
  return discover_units(mids, k, model.config().proj_dim, seed);
}

}  // namespace ser::hubert
