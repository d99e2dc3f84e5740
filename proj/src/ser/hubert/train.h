// ser/hubert/train.h

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

#include "ser/datasets/manifest.h"
#include "ser/dsp/mfcc.h"
#include "ser/fusion/score_table.h"
#include "ser/hubert/masking.h"
#include "ser/hubert/model.h"

namespace ser::hubert {

struct PretrainConfig {
  int iterations = 2;
  int steps_per_iteration = 500;
  double learning_rate = 1e-3;
  int k = 50;
  MaskSpec mask;
  EncoderConfig encoder;
  uint64_t seed = 7;
};

struct PretrainStep {
  int step = 0;  // global across iterations, 1-based
  double loss = 0.0;
};

struct PretrainResult {
  HubertModel model;
  std::vector<PretrainStep> log;
};

struct FinetuneConfig {
  int epochs = 12;
  double learning_rate = 3e-4;
  int batch_size = 8;
  uint64_t seed = 7;
};

struct FinetuneEpoch {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double train_acc = 0.0;
  double test_acc = 0.0;
};

struct FinetuneResult {
  HubertModel model;
  std::vector<FinetuneEpoch> history;
  fusion::ScoreTable test_scores;  // probability kind
};

// MFCC features per manifest row, in manifest order, extracted in
// parallel. Audio at other rates is linearly resampled to 16 kHz first.
std::vector<dsp::FeatureMatrix> extract_features(
    const datasets::Manifest &manifest);

// Masked unit prediction over the train split. Iteration 1 targets come
// from k-means on MFCC frames; each later iteration re-clusters the middle
// encoder layer's states and resets the optimizer. One utterance per Adam
// step, visiting the corpus in seeded shuffled order, with a fresh mask
// drawn every step. Deterministic per seed.
PretrainResult pretrain_hubert(const datasets::Manifest &manifest,
                               const PretrainConfig &cfg);

// Supervised pass: mean-pooled final states into the linear head, every
// finetune parameter updated at the (reduced) configured rate for a fixed
// epoch count. Labels outside the 4-class task raise DataError. Returns
// the tuned model, per-epoch stats and test-split scores.
FinetuneResult finetune_hubert(const HubertModel &pretrained,
                               const datasets::Manifest &manifest,
                               const FinetuneConfig &cfg);

// Scores arbitrary manifest rows with a tuned model (probability kind).
fusion::ScoreTable score_hubert(const HubertModel &model,
                                const datasets::Manifest &manifest);

// Pretrain log CSV: step,loss at 6 decimals.
void write_pretrain_log_csv(const std::vector<PretrainStep> &log,
                            const std::string &path);

// Finetune history CSV: epoch,train_loss,train_acc,test_acc at 6 decimals.
void write_finetune_history_csv(const std::vector<FinetuneEpoch> &history,
                                const std::string &path);

}  // namespace ser::hubert
