// ser/metrics/metrics.cc

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

#include "ser/metrics/metrics.h"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <string>

#include <json.hpp>

#include "ser/common/error.h"
#include "ser/common/textio.h"
#include "ser/datasets/emotion.h"

namespace ser::metrics {

long long ConfusionMatrix::total() const {
  return std::accumulate(counts.begin(), counts.end(), 0ll);
}

long long ConfusionMatrix::row_sum(int true_class) const {
  long long sum = 0;
  for (int p = 0; p < num_classes; ++p) sum += at(true_class, p);
  return sum;
}

long long ConfusionMatrix::col_sum(int predicted) const {
  long long sum = 0;
  for (int t = 0; t < num_classes; ++t) sum += at(t, predicted);
  return sum;
}

ConfusionMatrix confusion(const std::vector<int> &predictions,
                          const std::vector<int> &labels, int num_classes) {
  if (num_classes < 1)
    throw StructuralError("confusion: num_classes must be >= 1");
  if (predictions.size() != labels.size())
    throw StructuralError("confusion: predictions/labels length mismatch");
  ConfusionMatrix cm;
  cm.num_classes = num_classes;
  cm.counts.assign(static_cast<size_t>(num_classes) * num_classes, 0);
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes)
      throw DataError("confusion: label " + std::to_string(labels[i]) +
                      " outside [0, " + std::to_string(num_classes) + ")");
    if (predictions[i] < 0 || predictions[i] >= num_classes)
      throw DataError("confusion: prediction " +
                      std::to_string(predictions[i]) + " outside [0, " +
                      std::to_string(num_classes) + ")");
    ++cm.at(labels[i], predictions[i]);
  }
  return cm;
}

Prf1Report prf1(const ConfusionMatrix &cm) {
  Prf1Report report;
  report.per_class.resize(cm.num_classes);
  for (int c = 0; c < cm.num_classes; ++c) {
    ClassMetrics &m = report.per_class[c];
    m.tp = cm.at(c, c);
    m.fp = cm.col_sum(c) - m.tp;
    m.fn = cm.row_sum(c) - m.tp;
    m.support = cm.row_sum(c);
    m.precision = (m.tp + m.fp) > 0
                      ? static_cast<double>(m.tp) / (m.tp + m.fp)
                      : 0.0;
    m.recall = (m.tp + m.fn) > 0
                   ? static_cast<double>(m.tp) / (m.tp + m.fn)
                   : 0.0;
    m.f1 = (m.precision + m.recall) > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    report.macro_precision += m.precision;
    report.macro_recall += m.recall;
    report.macro_f1 += m.f1;
  }
  report.macro_precision /= cm.num_classes;
  report.macro_recall /= cm.num_classes;
  report.macro_f1 /= cm.num_classes;
  return report;
}

AccuracyReport accuracies(const ConfusionMatrix &cm) {
  const long long total = cm.total();
  if (total < 1) throw DataError("accuracies: empty confusion matrix");
  AccuracyReport report;
  long long trace = 0;
  double recall_sum = 0.0;
  int populated = 0;
  for (int c = 0; c < cm.num_classes; ++c) {
    trace += cm.at(c, c);
    const long long support = cm.row_sum(c);
    if (support > 0) {
      recall_sum += static_cast<double>(cm.at(c, c)) / support;
      ++populated;
    }
  }
  report.overall = static_cast<double>(trace) / total;
  report.balanced = recall_sum / populated;  // populated >= 1 since total > 0
  return report;
}

RocCurve roc(const std::vector<double> &scores, const std::vector<int> &labels,
             int positive_class) {
  if (scores.size() != labels.size())
    throw StructuralError("roc: scores/labels length mismatch");
  long long pos = 0, neg = 0;
  for (int l : labels) (l == positive_class ? pos : neg) += 1;
  if (pos == 0 || neg == 0)
    throw DataError("roc: need at least one positive and one negative row");

  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return scores[a] > scores[b];
  });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  long long tp = 0, fp = 0;
  size_t i = 0;
  while (i < order.size()) {
    // All rows tied at one threshold move the point in a single step, so
    // a tie block becomes one diagonal segment.
    const double threshold = scores[order[i]];
    while (i < order.size() && scores[order[i]] == threshold) {
      if (labels[order[i]] == positive_class)
        ++tp;
      else
        ++fp;
      ++i;
    }
    curve.points.push_back({static_cast<double>(fp) / neg,
                            static_cast<double>(tp) / pos});
  }

  double auc = 0.0;
  for (size_t p = 1; p < curve.points.size(); ++p) {
    const RocPoint &a = curve.points[p - 1];
    const RocPoint &b = curve.points[p];
    auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
  }
  curve.auc = auc;
  return curve;
}

Evaluation evaluate_scores(const fusion::ScoreTable &table) {
  if (table.rows.empty()) throw DataError("evaluate: empty score table");
  std::vector<int> labels;
  labels.reserve(table.rows.size());
  for (const fusion::ScoreRow &row : table.rows) {
    const auto label = datasets::emotion_from_name(row.label);
    if (!label)
      throw DataError("evaluate: row \"" + row.id + "\" has label \"" +
                      row.label + "\" outside the 4-class task");
    labels.push_back(static_cast<int>(*label));
  }
  Evaluation eval;
  eval.evaluated_rows = static_cast<int>(table.rows.size());
  const std::vector<int> predictions = fusion::decide(table);
  eval.cm = confusion(predictions, labels, datasets::kNumEmotions);
  eval.prf = prf1(eval.cm);
  eval.acc = accuracies(eval.cm);
  eval.roc_per_class.resize(datasets::kNumEmotions);
  for (int c = 0; c < datasets::kNumEmotions; ++c) {
    long long pos = 0;
    for (int l : labels) pos += (l == c) ? 1 : 0;
    if (pos == 0 || pos == static_cast<long long>(labels.size())) continue;
    std::vector<double> class_scores;
    class_scores.reserve(table.rows.size());
    for (const fusion::ScoreRow &row : table.rows)
      class_scores.push_back(row.scores[c]);
    eval.roc_per_class[c] = roc(class_scores, labels, c);
  }
  return eval;
}

std::string report_json(const Evaluation &eval) {
  nlohmann::json j;
  std::vector<std::string> class_names;
  for (int c = 0; c < eval.cm.num_classes; ++c)
    class_names.push_back(datasets::emotion_name(
        static_cast<datasets::EmotionLabel>(c)));
  j["classes"] = class_names;
  j["evaluated_rows"] = eval.evaluated_rows;

  std::vector<std::vector<long long>> counts;
  for (int t = 0; t < eval.cm.num_classes; ++t) {
    std::vector<long long> row;
    for (int p = 0; p < eval.cm.num_classes; ++p)
      row.push_back(eval.cm.at(t, p));
    counts.push_back(std::move(row));
  }
  j["confusion"] = counts;

  nlohmann::json per_class = nlohmann::json::array();
  for (int c = 0; c < eval.cm.num_classes; ++c) {
    const ClassMetrics &m = eval.prf.per_class[c];
    nlohmann::json e;
    e["class"] = class_names[c];
    e["support"] = m.support;
    e["tp"] = m.tp;
    e["fp"] = m.fp;
    e["fn"] = m.fn;
    e["precision"] = m.precision;
    e["recall"] = m.recall;
    e["f1"] = m.f1;
    if (eval.roc_per_class[c])
      e["auc"] = eval.roc_per_class[c]->auc;
    else
      e["auc"] = nullptr;
    per_class.push_back(std::move(e));
  }
  j["per_class"] = per_class;
  j["macro_precision"] = eval.prf.macro_precision;
  j["macro_recall"] = eval.prf.macro_recall;
  j["macro_f1"] = eval.prf.macro_f1;
  j["overall_accuracy"] = eval.acc.overall;
  j["balanced_accuracy"] = eval.acc.balanced;
  return j.dump(2) + "\n";
}

void write_report_json(const Evaluation &eval, const std::string &path) {
  common::write_text_file(path, report_json(eval));
}

void write_roc_csv(const Evaluation &eval, const std::string &path) {
  std::string out = "class,fpr,tpr\n";
  char buf[128];
  for (int c = 0; c < eval.cm.num_classes; ++c) {
    if (!eval.roc_per_class[c]) continue;
    const std::string name = datasets::emotion_name(
        static_cast<datasets::EmotionLabel>(c));
    for (const RocPoint &p : eval.roc_per_class[c]->points) {
      std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f\n", name.c_str(), p.fpr,
                    p.tpr);
      out += buf;
    }
  }
  common::write_text_file(path, out);
}

}  // namespace ser::metrics
