// ser/hubert/model.h

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
#include <string>
#include <vector>

#include "ser/common/checkpoint.h"
#include "ser/dsp/mfcc.h"
#include "ser/hubert/units.h"
#include "ser/numerics/autodiff.h"
#include "ser/numerics/matrix.h"

namespace ser::hubert {

struct EncoderConfig {
  int feat_dim = 39;
  int model_dim = 64;
  int layers = 4;
  int heads = 4;
  int ffn_dim = 256;
  int proj_dim = 64;
  double temperature = 0.1;  // cosine logit divisor
  bool positional_encoding = true;
};

// Post-norm transformer block: h = LN1(h + MHSA(h)), h = LN2(h + FFN(h)).
struct EncoderLayerParams {
  numerics::Matrix wq, bq, wk, bk, wv, bv, wo, bo;
  numerics::Matrix ln1_gain, ln1_bias;
  numerics::Matrix ffn_w1, ffn_b1, ffn_w2, ffn_b2;
  numerics::Matrix ln2_gain, ln2_bias;
};

// Fixed sine/cosine position table, num_frames x dim.
numerics::Matrix sinusoidal_encoding(int num_frames, int dim);

// Middle layer used for re-clustering: ceil(layers / 2).
int refine_layer_index(int layers);

// Masked-unit-prediction encoder with a classification head for
// fine-tuning. Heads stay small on purpose; the whole model must train on
// one core in minutes.
class HubertModel {
 public:
  HubertModel(const EncoderConfig &cfg, UnitCodebook codebook, uint64_t seed);

  const EncoderConfig &config() const { return cfg_; }
  const UnitCodebook &codebook() const { return codebook_; }
  void set_codebook(UnitCodebook codebook);

  long long param_count() const;

  // Canonical orders used by the optimizer, checkpoints and tape leaves.
  // Pretraining updates everything in the masked-prediction path:
  // input projection, mask vector, encoder layers, output projection,
  // unit embeddings. Fine-tuning updates the classifier path: input
  // projection, encoder layers, classifier head (the mask vector and
  // the unit-prediction head are not part of that forward pass).
  std::vector<numerics::Matrix *> pretrain_parameters();
  std::vector<numerics::Matrix *> finetune_parameters();
  std::vector<const numerics::Matrix *> all_tensors() const;

  struct Encoded {
    // states[0] is the projected (and masked / position-encoded) input;
    // states[i] the output of layer i.
    std::vector<numerics::Matrix> states;
    // attention[l][h] is the T x T softmax weight matrix of head h in
    // layer l+1; filled only when capture_attention is set.
    std::vector<std::vector<numerics::Matrix>> attention;
  };
  // Plain forward pass retaining every layer's states. mask may be null
  // for the unmasked pass used by re-clustering and classification.
  Encoded encode(const dsp::FeatureMatrix &features,
                 const std::vector<uint8_t> *mask = nullptr,
                 bool capture_attention = false) const;

  // Cosine-similarity unit logits for final-layer states:
  // logit[t,u] = cos(proj(state_t), emb_u) / temperature. A zero vector
  // has cosine 0 against everything.
  numerics::Matrix pretrain_logits(const numerics::Matrix &final_state) const;

  struct Prediction {
    numerics::Matrix logits;            // 1 x num classes
    std::vector<double> probabilities;  // softmax of logits
  };
  Prediction predict(const dsp::FeatureMatrix &features) const;

  // Differentiable masked unit prediction loss. labels holds one unit id
  // per frame; the loss averages over masked frames only. param_vars
  // receives the pretrain parameter leaves in canonical order.
  numerics::Tape::Var build_pretrain_loss(
      numerics::Tape &tape, const dsp::FeatureMatrix &features,
      const std::vector<int> &labels, const std::vector<uint8_t> &mask,
      std::vector<numerics::Tape::Var> *param_vars) const;

  // Differentiable mean-pool + linear head classification loss (no
  // masking). param_vars receives the finetune parameter leaves.
  numerics::Tape::Var build_finetune_loss(
      numerics::Tape &tape, const dsp::FeatureMatrix &features, int label,
      std::vector<numerics::Tape::Var> *param_vars) const;

  // kind is "hubert_pretrain" or "hubert_classifier"; both store every
  // tensor so a classifier can resume from either.
  common::Checkpoint to_checkpoint(const std::string &kind,
                                   uint64_t seed) const;
  static HubertModel from_checkpoint(const common::Checkpoint &ckpt);

 private:
  EncoderConfig cfg_;
  UnitCodebook codebook_;
  numerics::Matrix in_w_, in_b_;  // feat_dim -> model_dim
  numerics::Matrix mask_vec_;     // 1 x model_dim, learned
  std::vector<EncoderLayerParams> layers_;
  numerics::Matrix out_w_, out_b_;  // model_dim -> proj_dim
  numerics::Matrix cls_w_, cls_b_;  // model_dim -> num classes, zero init
};

// Unmasked forward over all utterances, then fresh unit discovery on the
// middle layer's states (refine_layer_index of the config).
UnitDiscovery refine_units(const HubertModel &model,
                           const std::vector<dsp::FeatureMatrix> &features,
                           int k, uint64_t seed);

}  // namespace ser::hubert
