// ser/gcn/train.h

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
#include "ser/fusion/score_table.h"
#include "ser/gcn/model.h"
#include "ser/textgraph/embedding.h"

namespace ser::gcn {

struct TrainConfig {
  int max_epochs = 45;
  int patience = 10;
  double learning_rate = 0.01;
  int batch_size = 16;
  uint64_t seed = 7;
};

struct EpochStats {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double train_acc = 0.0;
  double test_acc = 0.0;
};

struct GcnTrainResult {
  GcnModel model;  // best-epoch parameters
  std::vector<EpochStats> history;
  int best_epoch = 0;
  fusion::ScoreTable test_scores;  // probability kind, best model
};

// Adam over summed per-sentence losses in shuffled mini-batches; after
// each epoch the test split is evaluated, with patience-based early
// stopping on test accuracy and best-epoch parameters restored at the
// end. Deterministic per seed. Raises DataError for an empty split, an
// empty transcript, or a label outside the 4-class task.
GcnTrainResult train_gcn(const datasets::Manifest &manifest,
                         const textgraph::EmbeddingTable &embeddings,
                         const GcnConfig &model_cfg, const TrainConfig &cfg);

// Scores arbitrary manifest rows with a trained model (probability kind).
fusion::ScoreTable score_gcn(const GcnModel &model,
                             const datasets::Manifest &manifest,
                             const textgraph::EmbeddingTable &embeddings);

// history CSV: epoch,train_loss,train_acc,test_acc at 6 decimals.
void write_history_csv(const std::vector<EpochStats> &history,
                       const std::string &path);

}  // namespace ser::gcn
