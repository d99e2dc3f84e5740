// ser/hubert/train.cc

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

#include "ser/hubert/train.h"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <string>
#include <utility>

#include "ser/common/error.h"
#include "ser/common/parallel.h"
#include "ser/common/rng.h"
#include "ser/common/textio.h"
#include "ser/dsp/wav.h"
#include "ser/numerics/ops.h"

namespace ser::hubert {

namespace {

std::vector<double> flatten(const std::vector<numerics::Matrix *> &ms) {
  std::vector<double> flat;
  for (const numerics::Matrix *m : ms)
    flat.insert(flat.end(), m->data(), m->data() + m->size());
  return flat;
}

void unflatten(const std::vector<double> &flat,
               const std::vector<numerics::Matrix *> &ms) {
  size_t at = 0;
  for (numerics::Matrix *m : ms) {
    std::copy(flat.begin() + at, flat.begin() + at + m->size(), m->data());
    at += m->size();
  }
}

int emotion_index(const datasets::Utterance &u) {
  const auto label = datasets::emotion_from_name(u.label);
  if (!label)
    throw DataError("hubert: utterance \"" + u.id + "\" has label \"" +
                    u.label + "\" outside the 4-class task");
  return static_cast<int>(*label);
}

int predict_class(const HubertModel &model, const dsp::FeatureMatrix &f) {
  const auto pred = model.predict(f);
  int best = 0;
  for (size_t c = 1; c < pred.probabilities.size(); ++c)
    if (pred.probabilities[c] > pred.probabilities[best])
      best = static_cast<int>(c);
  return best;
}

double accuracy(const HubertModel &model,
                const std::vector<dsp::FeatureMatrix> &features,
                const std::vector<int> &labels,
                const std::vector<int> &rows) {
  if (rows.empty()) return 0.0;
  std::vector<int> predicted(rows.size());
  common::parallel_for(static_cast<int>(rows.size()), [&](int i) {
    predicted[i] = predict_class(model, features[rows[i]]);
  });
  int correct = 0;
  for (size_t i = 0; i < rows.size(); ++i)
    if (predicted[i] == labels[rows[i]]) ++correct;
  return static_cast<double>(correct) / rows.size();
}

fusion::ScoreTable score_rows(const HubertModel &model,
                              const datasets::Manifest &manifest,
                              const std::vector<dsp::FeatureMatrix> &features,
                              const std::vector<int> &rows) {
  fusion::ScoreTable table;
  table.kind = fusion::ScoreKind::kProbability;
  table.rows.resize(rows.size());
  common::parallel_for(static_cast<int>(rows.size()), [&](int i) {
    const datasets::Utterance &u = manifest[rows[i]];
    fusion::ScoreRow row;
    row.id = u.id;
    row.label = u.label;
    const auto pred = model.predict(features[rows[i]]);
    for (int c = 0; c < datasets::kNumEmotions; ++c)
      row.scores[c] = pred.probabilities[c];
    table.rows[i] = std::move(row);
  });
  return table;
}

}  // namespace

std::vector<dsp::FeatureMatrix> extract_features(
    const datasets::Manifest &manifest) {
  std::vector<dsp::FeatureMatrix> features(manifest.size());
  common::parallel_for(static_cast<int>(manifest.size()), [&](int i) {
    dsp::Waveform w = dsp::read_wav(manifest[i].audio_path);
    if (w.sample_rate != 16000) w = dsp::resample_linear(w, 16000);
    features[i] = dsp::mfcc(w);
  });
  return features;
}

PretrainResult pretrain_hubert(const datasets::Manifest &manifest,
                               const PretrainConfig &cfg) {
  if (cfg.iterations < 1 || cfg.steps_per_iteration < 1 || cfg.k < 1)
    throw StructuralError("pretrain_hubert: bad config");
  if (cfg.mask.target_coverage <= 0.0)
    throw StructuralError(
        "pretrain_hubert: target_coverage must be positive; the loss needs "
        "masked frames");
  datasets::Manifest train_rows;
  for (const datasets::Utterance &u : manifest)
    if (u.split == "train") train_rows.push_back(u);
  if (train_rows.empty())
    throw DataError("pretrain_hubert: no train rows in the manifest");

  std::vector<dsp::FeatureMatrix> features = extract_features(train_rows);
  EncoderConfig enc = cfg.encoder;
  enc.feat_dim = features.front().dim();

  UnitDiscovery units =
      discover_units(features, cfg.k, enc.proj_dim, cfg.seed);
  HubertModel model(enc, std::move(units.codebook), cfg.seed);

  PretrainResult result{std::move(model), {}};
  common::Rng order_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  common::Rng mask_rng(cfg.seed ^ 0x517cc1b727220a95ULL);
  std::vector<int> order(train_rows.size());
  std::iota(order.begin(), order.end(), 0);

  int global_step = 0;
  for (int iteration = 1; iteration <= cfg.iterations; ++iteration) {
    if (iteration > 1) {
      UnitDiscovery refined = refine_units(
          result.model, features, cfg.k,
          cfg.seed + static_cast<uint64_t>(iteration));
      result.model.set_codebook(std::move(refined.codebook));
      units.labels = std::move(refined.labels);
    }
    const auto params = result.model.pretrain_parameters();
    std::vector<double> flat = flatten(params);
    // Fresh optimizer per iteration: the targets (and the embedding
    // table) change wholesale, so stale moments would mislead.
    numerics::AdamState adam(flat.size(), cfg.learning_rate);

    size_t cursor = order.size();  // forces a shuffle on the first step
    for (int step = 1; step <= cfg.steps_per_iteration; ++step) {
      if (cursor >= order.size()) {
        order_rng.shuffle(order);
        cursor = 0;
      }
      const int idx = order[cursor++];
      MaskSpec spec = cfg.mask;
      spec.seed = mask_rng.next_u64();
      const std::vector<uint8_t> mask =
          make_masks(features[idx].frames(), spec);

      numerics::Tape tape;
      std::vector<numerics::Tape::Var> param_vars;
      const auto loss = result.model.build_pretrain_loss(
          tape, features[idx], units.labels[idx], mask, &param_vars);
      const double loss_value = tape.value(loss)(0, 0);
      tape.backward(loss);
      std::vector<double> grads;
      grads.reserve(flat.size());
      for (const auto var : param_vars) {
        const numerics::Matrix &g = tape.grad(var);
        grads.insert(grads.end(), g.data(), g.data() + g.size());
      }
      numerics::adam_step(flat, grads, adam);
      unflatten(flat, params);
      result.log.push_back({++global_step, loss_value});
    }
  }
  return result;
}

FinetuneResult finetune_hubert(const HubertModel &pretrained,
                               const datasets::Manifest &manifest,
                               const FinetuneConfig &cfg) {
  if (cfg.epochs < 1 || cfg.batch_size < 1)
    throw StructuralError("finetune_hubert: bad config");
  std::vector<int> labels(manifest.size());
  std::vector<int> train_rows, test_rows;
  for (size_t i = 0; i < manifest.size(); ++i) {
    labels[i] = emotion_index(manifest[i]);
    (manifest[i].split == "test" ? test_rows : train_rows)
        .push_back(static_cast<int>(i));
  }
  if (train_rows.empty())
    throw DataError("finetune_hubert: train split is empty");
  if (test_rows.empty())
    throw DataError("finetune_hubert: test split is empty");

  std::vector<dsp::FeatureMatrix> features = extract_features(manifest);
  FinetuneResult result{pretrained, {}, {}};
  const auto params = result.model.finetune_parameters();
  std::vector<double> flat = flatten(params);
  numerics::AdamState adam(flat.size(), cfg.learning_rate);
  common::Rng shuffle_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

  std::vector<int> order = train_rows;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double loss_sum = 0.0;
    for (size_t batch_start = 0; batch_start < order.size();
         batch_start += cfg.batch_size) {
      const size_t batch_end =
          std::min(order.size(), batch_start + cfg.batch_size);
      std::vector<double> grad_sum(flat.size(), 0.0);
      for (size_t k = batch_start; k < batch_end; ++k) {
        const int idx = order[k];
        numerics::Tape tape;
        std::vector<numerics::Tape::Var> param_vars;
        const auto loss = result.model.build_finetune_loss(
            tape, features[idx], labels[idx], &param_vars);
        loss_sum += tape.value(loss)(0, 0);
        tape.backward(loss);
        size_t at = 0;
        for (const auto var : param_vars) {
          const numerics::Matrix &g = tape.grad(var);
          for (long i = 0; i < g.size(); ++i) grad_sum[at + i] += g.data()[i];
          at += g.size();
        }
      }
      numerics::adam_step(flat, grad_sum, adam);
      unflatten(flat, params);
    }

    FinetuneEpoch stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / static_cast<double>(train_rows.size());
    stats.train_acc = accuracy(result.model, features, labels, train_rows);
    stats.test_acc = accuracy(result.model, features, labels, test_rows);
    result.history.push_back(stats);
  }

  result.test_scores = score_rows(result.model, manifest, features, test_rows);
  return result;
}

fusion::ScoreTable score_hubert(const HubertModel &model,
                                const datasets::Manifest &manifest) {
  if (manifest.empty()) throw DataError("score_hubert: empty manifest");
  const std::vector<dsp::FeatureMatrix> features = extract_features(manifest);
  std::vector<int> rows(manifest.size());
  std::iota(rows.begin(), rows.end(), 0);
  return score_rows(model, manifest, features, rows);
}

void write_pretrain_log_csv(const std::vector<PretrainStep> &log,
                            const std::string &path) {
  std::string out = "step,loss\n";
  char buf[64];
  for (const PretrainStep &s : log) {
    std::snprintf(buf, sizeof(buf), "%d,%.6f\n", s.step, s.loss);
    out += buf;
  }
  common::write_text_file(path, out);
}

void write_finetune_history_csv(const std::vector<FinetuneEpoch> &history,
                                const std::string &path) {
  std::string out = "epoch,train_loss,train_acc,test_acc\n";
  char buf[128];
  for (const FinetuneEpoch &e : history) {
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%.6f\n", e.epoch,
                  e.train_loss, e.train_acc, e.test_acc);
    out += buf;
  }
  common::write_text_file(path, out);
}

}  // namespace ser::hubert
