// ser/fusion/score_table.h

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

#include <array>
#include <string>
#include <vector>

#include "ser/datasets/emotion.h"

namespace ser::fusion {

enum class ScoreKind { kRaw, kProbability, kFused };

const char *score_kind_name(ScoreKind kind);
ScoreKind score_kind_from_name(const std::string &name);

struct ScoreRow {
  std::string id;
  std::string label;  // true label name; empty when unknown
  std::array<double, datasets::kNumEmotions> scores{};
};

// Per-utterance class scores from one branch (or from fusing two). The
// kind records where a table sits in the pipeline: raw model outputs,
// row-softmaxed probabilities, or elementwise-max fused scores (which are
// deliberately not a distribution).
struct ScoreTable {
  ScoreKind kind = ScoreKind::kRaw;
  std::vector<ScoreRow> rows;
};

// CSV: a `# kind=<raw|probability|fused>` line, the header
// id,label,p_angry,p_happy,p_neutral,p_sad, then one row per utterance
// with scores printed at 6 decimals. Loading enforces unique ids, finite
// scores, and (for probability tables) rows summing to 1 +/- 1e-6.
void write_score_table(const ScoreTable &table, const std::string &path);
ScoreTable load_score_table(const std::string &path);

// Row-wise softmax; input must be raw kind. Non-finite scores raise
// DataError naming the row.
ScoreTable to_probabilities(const ScoreTable &table);

// Elementwise max per class over two probability tables with identical id
// sets (order-insensitive; output follows a's order). No renormalization:
// the fused row feeds argmax only. Mismatched ids raise DataError listing
// the symmetric difference.
ScoreTable fuse_max(const ScoreTable &a, const ScoreTable &b);

// Argmax per row, ties to the lowest class index. Table must be
// probability or fused kind.
int decide_row(const ScoreRow &row);
std::vector<int> decide(const ScoreTable &table);

}  // namespace ser::fusion
