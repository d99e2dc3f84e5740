// ser/metrics/metrics.h

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

#include <optional>
#include <string>
#include <vector>

#include "ser/fusion/score_table.h"

namespace ser::metrics {

// Row-major C x C counts; rows are true classes, columns predictions.
struct ConfusionMatrix {
  int num_classes = 0;
  std::vector<long long> counts;

  long long at(int true_class, int predicted) const {
    return counts[static_cast<size_t>(true_class) * num_classes + predicted];
  }
  long long &at(int true_class, int predicted) {
    return counts[static_cast<size_t>(true_class) * num_classes + predicted];
  }
  long long total() const;
  long long row_sum(int true_class) const;   // support
  long long col_sum(int predicted) const;
};

ConfusionMatrix confusion(const std::vector<int> &predictions,
                          const std::vector<int> &labels, int num_classes);

struct ClassMetrics {
  long long tp = 0, fp = 0, fn = 0;
  long long support = 0;
  // Zero denominators yield 0 rather than dividing.
  double precision = 0.0, recall = 0.0, f1 = 0.0;
};

struct Prf1Report {
  std::vector<ClassMetrics> per_class;
  // Plain means over all classes, zero-support ones included (their zeros
  // count; a class nobody predicts or owns still drags the average).
  double macro_precision = 0.0, macro_recall = 0.0, macro_f1 = 0.0;
};

Prf1Report prf1(const ConfusionMatrix &cm);

struct AccuracyReport {
  double overall = 0.0;   // trace / total
  double balanced = 0.0;  // mean recall over classes with support > 0
};

// Raises DataError on an empty matrix. The two accuracies are always
// labeled apart; there is no single "weighted accuracy" figure here.
AccuracyReport accuracies(const ConfusionMatrix &cm);

struct RocPoint {
  double fpr = 0.0, tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // sorted by FPR, (0,0) .. (1,1)
  double auc = 0.0;
};

// One-vs-rest sweep over the distinct score thresholds, AUC by trapezoid
// (ties contribute half credit, matching the Mann-Whitney statistic).
// Needs at least one positive and one negative row.
RocCurve roc(const std::vector<double> &scores, const std::vector<int> &labels,
             int positive_class);

// Everything the evaluate command reports, computed from one decided
// score table. ROC entries are empty for classes that appear only as
// positives or only as negatives.
struct Evaluation {
  int evaluated_rows = 0;
  ConfusionMatrix cm;
  Prf1Report prf;
  AccuracyReport acc;
  std::vector<std::optional<RocCurve>> roc_per_class;
};

// Decides the table (probability or fused kind), maps the stored labels
// and runs the full battery. Rows with missing or unknown labels raise
// DataError.
Evaluation evaluate_scores(const fusion::ScoreTable &table);

// JSON report with confusion counts, per-class metrics (AUC null where
// undefined), macro averages and both accuracies.
void write_report_json(const Evaluation &eval, const std::string &path);
std::string report_json(const Evaluation &eval);

// ROC points as CSV class,fpr,tpr at 6 decimals; undefined classes are
// simply absent.
void write_roc_csv(const Evaluation &eval, const std::string &path);

}  // namespace ser::metrics
