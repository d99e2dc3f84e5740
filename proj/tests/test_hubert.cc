// ser/tests/test_hubert.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ser/common/checkpoint.h"
#include "ser/common/error.h"
#include "ser/common/rng.h"
#include "ser/common/textio.h"
#include "ser/datasets/manifest.h"
#include "ser/dsp/mfcc.h"
#include "ser/dsp/wav.h"
#include "ser/hubert/masking.h"
#include "ser/hubert/model.h"
#include "ser/hubert/train.h"
#include "ser/hubert/units.h"
#include "ser/numerics/gradcheck.h"

using ser::DataError;
using ser::StructuralError;
using ser::common::Rng;
using ser::dsp::FeatureMatrix;
using ser::hubert::EncoderConfig;
using ser::hubert::HubertModel;
using ser::hubert::MaskSpec;
using ser::hubert::UnitCodebook;
using ser::numerics::Matrix;
namespace fs = std::filesystem;

namespace {

const double kTau = 2.0 * std::acos(-1.0);

Matrix random_matrix(int r, int c, uint64_t seed, double lo = -1.0,
                     double hi = 1.0) {
  Rng rng(seed);
  Matrix m(r, c);
  for (long i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(lo, hi);
  return m;
}

FeatureMatrix make_features(int frames, int dim, uint64_t seed) {
  return FeatureMatrix{random_matrix(frames, dim, seed)};
}

double coverage(const std::vector<uint8_t> &mask) {
  return static_cast<double>(ser::hubert::mask_count(mask)) / mask.size();
}

// Tiny but structurally complete encoder for gradient and equivariance
// checks: 2 layers, 2 heads, nothing shares a dimension by accident.
EncoderConfig tiny_config() {
  EncoderConfig cfg;
  cfg.feat_dim = 5;
  cfg.model_dim = 8;
  cfg.layers = 2;
  cfg.heads = 2;
  cfg.ffn_dim = 12;
  cfg.proj_dim = 6;
  return cfg;
}

UnitCodebook tiny_codebook(int k, int feat_dim, int proj_dim, uint64_t seed) {
  UnitCodebook cb;
  cb.k = k;
  cb.centroids = random_matrix(k, feat_dim, seed);
  cb.unit_embeddings = random_matrix(k, proj_dim, seed + 1);
  return cb;
}

fs::path scratch_dir() {
  fs::path dir = fs::temp_directory_path() / "ser_duo_test_hubert";
  fs::create_directories(dir);
  return dir;
}

void write_tone(const fs::path &path, double hz, double seconds,
                uint64_t seed) {
  ser::dsp::Waveform w;
  w.sample_rate = 16000;
  const int n = static_cast<int>(seconds * 16000);
  Rng rng(seed);
  w.samples.reserve(n);
  for (int i = 0; i < n; ++i)
    w.samples.push_back(0.6 * std::sin(kTau * hz * i / 16000.0) +
                        0.01 * rng.uniform(-1.0, 1.0));
  ser::dsp::write_wav_pcm16(path.string(), w);
}

// Four tone classes with well separated fundamentals; MFCCs make them
// trivially separable, which is the point of the training smoke tests.
ser::datasets::Manifest tone_manifest(const fs::path &dir, int train_per_class,
                                      int test_per_class) {
  const double freqs[4] = {220.0, 330.0, 440.0, 660.0};
  const char *labels[4] = {"angry", "happy", "neutral", "sad"};
  ser::datasets::Manifest manifest;
  fs::create_directories(dir);
  uint64_t seed = 100;
  for (int c = 0; c < 4; ++c) {
    for (int i = 0; i < train_per_class + test_per_class; ++i) {
      ser::datasets::Utterance u;
      u.id = std::string(labels[c]) + "_" + std::to_string(i);
      fs::path wav = dir / (u.id + ".wav");
      write_tone(wav, freqs[c] * (1.0 + 0.01 * (i % 3)), 0.55, seed++);
      u.audio_path = wav.string();
      u.transcript = "tone";
      u.label = labels[c];
      u.split = i < train_per_class ? "train" : "test";
      u.source = "synthetic";
      manifest.push_back(u);
    }
  }
  return manifest;
}

}  // namespace

TEST_CASE("a sequence of one span length is fully masked") {
  MaskSpec spec;
  auto mask = ser::hubert::make_masks(spec.span_len, spec);
  REQUIRE(mask.size() == 10);
  CHECK(ser::hubert::mask_count(mask) == 10);
}

TEST_CASE("same seed reproduces the mask, coverage averages to target") {
  MaskSpec spec;
  spec.seed = 99;
  auto a = ser::hubert::make_masks(1000, spec);
  auto b = ser::hubert::make_masks(1000, spec);
  CHECK(a == b);

  double sum = 0;
  for (uint64_t seed = 0; seed < 200; ++seed) {
    spec.seed = seed;
    sum += coverage(ser::hubert::make_masks(1000, spec));
  }
  const double mean = sum / 200.0;
  CHECK(mean >= 0.45);
  CHECK(mean <= 0.55);
}

TEST_CASE("per-mask coverage stays within a tenth of target") {
  MaskSpec spec;
  for (int frames : {40, 50, 63, 100, 173, 400, 1000}) {
    double sum = 0;
    for (uint64_t seed = 0; seed < 100; ++seed) {
      spec.seed = seed;
      const double c = coverage(ser::hubert::make_masks(frames, spec));
      CAPTURE(frames);
      CAPTURE(seed);
      CHECK(c >= 0.4 - 1e-12);
      CHECK(c <= 0.6 + 1e-12);
      sum += c;
    }
    const double mean = sum / 100.0;
    CHECK(mean >= 0.4 - 1e-12);
    CHECK(mean <= 0.6 + 1e-12);
  }
}

TEST_CASE("sinusoidal encoding matches the closed form") {
  const int dim = 6;
  auto pe = ser::hubert::sinusoidal_encoding(4, dim);
  REQUIRE(pe.rows() == 4);
  REQUIRE(pe.cols() == dim);
  for (int t = 0; t < 4; ++t) {
    for (int j = 0; j + 1 < dim; j += 2) {
      const double rate = std::pow(10000.0, static_cast<double>(j) / dim);
      CHECK(pe(t, j) == doctest::Approx(std::sin(t / rate)).epsilon(1e-12));
      CHECK(pe(t, j + 1) ==
            doctest::Approx(std::cos(t / rate)).epsilon(1e-12));
    }
  }
  CHECK(pe(0, 0) == 0.0);
  CHECK(pe(0, 1) == 1.0);

  auto odd = ser::hubert::sinusoidal_encoding(3, 5);
  CHECK(odd.cols() == 5);
  CHECK_THROWS_AS(ser::hubert::sinusoidal_encoding(0, 4), StructuralError);
}

TEST_CASE("the refinement layer is the middle of the stack") {
  CHECK(ser::hubert::refine_layer_index(1) == 1);
  CHECK(ser::hubert::refine_layer_index(2) == 1);
  CHECK(ser::hubert::refine_layer_index(4) == 2);
  CHECK(ser::hubert::refine_layer_index(5) == 3);
  CHECK(ser::hubert::refine_layer_index(12) == 6);
  CHECK_THROWS_AS(ser::hubert::refine_layer_index(0), StructuralError);
}

TEST_CASE("unit discovery is deterministic and honors tight blobs") {
  std::vector<FeatureMatrix> features;
  features.push_back(make_features(30, 4, 1));
  features.push_back(features[0]);
  auto disc = ser::hubert::discover_units(features, 5, 6, 3);
  CHECK(disc.codebook.k == 5);
  CHECK(disc.codebook.centroids.rows() == 5);
  CHECK(disc.codebook.centroids.cols() == 4);
  CHECK(disc.codebook.unit_embeddings.rows() == 5);
  CHECK(disc.codebook.unit_embeddings.cols() == 6);
  REQUIRE(disc.labels.size() == 2);
  CHECK(disc.labels[0] == disc.labels[1]);

  // Three tight blobs far apart: every frame of a blob lands in one unit
  // and agrees with a brute-force nearest-centroid scan.
  std::vector<FeatureMatrix> blobs;
  Matrix pts(30, 3);
  Rng rng(9);
  for (int i = 0; i < 30; ++i) {
    const int blob = i / 10;
    for (int j = 0; j < 3; ++j)
      pts(i, j) = 50.0 * blob + 0.01 * rng.uniform(-1.0, 1.0);
  }
  blobs.push_back(FeatureMatrix{pts});
  auto bd = ser::hubert::discover_units(blobs, 3, 4, 11);
  REQUIRE(bd.labels[0].size() == 30);
  for (int blob = 0; blob < 3; ++blob)
    for (int i = 1; i < 10; ++i)
      CHECK(bd.labels[0][blob * 10 + i] == bd.labels[0][blob * 10]);
  for (int i = 0; i < 30; ++i) {
    int best = 0;
    double best_d = 1e300;
    for (int u = 0; u < 3; ++u) {
      double d = 0;
      for (int j = 0; j < 3; ++j) {
        const double diff = pts(i, j) - bd.codebook.centroids(u, j);
        d += diff * diff;
      }
      if (d < best_d) {
        best_d = d;
        best = u;
      }
    }
    CHECK(bd.labels[0][i] == best);
  }

  auto one = ser::hubert::discover_units(blobs, 1, 4, 2);
  for (int label : one.labels[0]) CHECK(label == 0);

  std::vector<FeatureMatrix> tiny{make_features(3, 4, 5)};
  CHECK_THROWS_AS(ser::hubert::discover_units(tiny, 8, 4, 1), DataError);
  CHECK_THROWS_AS(
      ser::hubert::assign_units(disc.codebook, make_features(4, 7, 8)),
      DataError);
}

TEST_CASE("zero layers leave the projected input untouched") {
  EncoderConfig cfg = tiny_config();
  cfg.layers = 0;
  cfg.positional_encoding = false;
  HubertModel model(cfg, tiny_codebook(3, cfg.feat_dim, cfg.proj_dim, 4), 7);
  auto features = make_features(6, cfg.feat_dim, 12);
  auto out = model.encode(features);
  REQUIRE(out.states.size() == 1);
  CHECK(out.states.back().rows() == 6);
  CHECK(out.states.back().cols() == cfg.model_dim);

  // All-ones mask replaces every projected row with the learned mask
  // vector, so the rows collapse to a single repeated value.
  std::vector<uint8_t> all(6, 1);
  auto masked = model.encode(features, &all);
  const Matrix &s = masked.states[0];
  for (int t = 1; t < 6; ++t)
    for (int j = 0; j < cfg.model_dim; ++j)
      CHECK(s(t, j) == s(0, j));
  CHECK(ser::numerics::max_abs_diff(s, out.states[0]) > 1e-6);
}

TEST_CASE("positional encoding is added after mask replacement") {
  EncoderConfig cfg = tiny_config();
  cfg.layers = 0;
  cfg.positional_encoding = true;
  HubertModel model(cfg, tiny_codebook(3, cfg.feat_dim, cfg.proj_dim, 4), 7);
  auto features = make_features(5, cfg.feat_dim, 13);
  std::vector<uint8_t> all(5, 1);
  auto masked = model.encode(features, &all);
  auto pe = ser::hubert::sinusoidal_encoding(5, cfg.model_dim);
  // Subtracting the encoding must recover one constant row: the mask
  // vector was written first, the position signal second.
  for (int t = 1; t < 5; ++t)
    for (int j = 0; j < cfg.model_dim; ++j)
      CHECK(masked.states[0](t, j) - pe(t, j) ==
            doctest::Approx(masked.states[0](0, j) - pe(0, j))
                .epsilon(1e-12));
}

TEST_CASE("attention weights are row-stochastic") {
  EncoderConfig cfg = tiny_config();
  HubertModel model(cfg, tiny_codebook(4, cfg.feat_dim, cfg.proj_dim, 6), 3);
  auto features = make_features(7, cfg.feat_dim, 21);
  auto out = model.encode(features, nullptr, true);
  REQUIRE(out.states.size() == 3);
  REQUIRE(out.attention.size() == 2);
  for (const auto &layer : out.attention) {
    REQUIRE(layer.size() == 2);
    for (const Matrix &head : layer) {
      REQUIRE(head.rows() == 7);
      REQUIRE(head.cols() == 7);
      for (int i = 0; i < 7; ++i) {
        double sum = 0;
        for (int j = 0; j < 7; ++j) {
          sum += head(i, j);
          CHECK(head(i, j) >= 0.0);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
      }
    }
  }

  CHECK_THROWS_AS(model.encode(make_features(4, 9, 2)), DataError);
  std::vector<uint8_t> short_mask(3, 0);
  CHECK_THROWS_AS(model.encode(features, &short_mask), StructuralError);
}

TEST_CASE("frame permutation commutes with the encoder when unpositioned") {
  EncoderConfig cfg = tiny_config();
  cfg.positional_encoding = false;
  HubertModel model(cfg, tiny_codebook(3, cfg.feat_dim, cfg.proj_dim, 5), 19);
  auto features = make_features(6, cfg.feat_dim, 31);
  const int perm[6] = {4, 0, 5, 2, 1, 3};
  Matrix shuffled(6, cfg.feat_dim);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < cfg.feat_dim; ++j)
      shuffled(i, j) = features.values(perm[i], j);

  auto base = model.encode(features).states.back();
  auto moved = model.encode(FeatureMatrix{shuffled}).states.back();
  double worst = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < cfg.model_dim; ++j)
      worst = std::max(worst, std::abs(moved(i, j) - base(perm[i], j)));
  CHECK(worst <= 1e-9);

  // Negative control: position information must break the symmetry.
  cfg.positional_encoding = true;
  HubertModel placed(cfg, tiny_codebook(3, cfg.feat_dim, cfg.proj_dim, 5), 19);
  auto pbase = placed.encode(features).states.back();
  auto pmoved = placed.encode(FeatureMatrix{shuffled}).states.back();
  double pworst = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < cfg.model_dim; ++j)
      pworst = std::max(pworst, std::abs(pmoved(i, j) - pbase(perm[i], j)));
  CHECK(pworst > 1e-6);
}

TEST_CASE("cosine unit logits match the dot-over-norm oracle") {
  EncoderConfig cfg;
  cfg.feat_dim = 3;
  cfg.model_dim = 4;
  cfg.layers = 0;
  cfg.heads = 2;
  cfg.ffn_dim = 8;
  cfg.proj_dim = 5;
  HubertModel model(cfg, tiny_codebook(2, 3, 5, 40), 7);

  // Pin the projection and embeddings through the parameter list; the
  // shapes 4x5, 1x5 and 2x5 are unique in this configuration.
  Matrix proj(4, 5);
  for (int i = 0; i < 4; ++i) proj(i, i) = 1.0;
  Matrix emb(2, 5);
  emb(0, 0) = 2.0;
  emb(1, 2) = 3.0;
  for (Matrix *p : model.pretrain_parameters()) {
    if (p->rows() == 4 && p->cols() == 5) *p = proj;
    if (p->rows() == 1 && p->cols() == 5) *p = Matrix(1, 5);
    if (p->rows() == 2 && p->cols() == 5) *p = emb;
  }

  Matrix states = Matrix::of({{7.0, 0.0, 0.0, 0.0},
                              {0.0, 0.0, 0.0, 0.0},
                              {1.0, 0.0, 1.0, 0.0}});
  auto logits = model.pretrain_logits(states);
  REQUIRE(logits.rows() == 3);
  REQUIRE(logits.cols() == 2);
  CHECK(logits(0, 0) == doctest::Approx(10.0).epsilon(1e-12));  // parallel
  CHECK(logits(0, 1) == doctest::Approx(0.0).epsilon(1e-12));   // orthogonal
  CHECK(logits(1, 0) == 0.0);  // zero vector keeps cosine 0
  CHECK(logits(1, 1) == 0.0);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(logits(2, 0) == doctest::Approx(10.0 * inv_sqrt2).epsilon(1e-12));
  CHECK(logits(2, 1) == doctest::Approx(10.0 * inv_sqrt2).epsilon(1e-12));

  Matrix random_states = random_matrix(6, 4, 91);
  auto got = model.pretrain_logits(random_states);
  for (int t = 0; t < 6; ++t) {
    double v[5] = {random_states(t, 0), random_states(t, 1),
                   random_states(t, 2), random_states(t, 3), 0.0};
    double vn = 0;
    for (double x : v) vn += x * x;
    vn = std::sqrt(vn);
    for (int u = 0; u < 2; ++u) {
      double dot = 0, un = 0;
      for (int j = 0; j < 5; ++j) {
        dot += v[j] * emb(u, j);
        un += emb(u, j) * emb(u, j);
      }
      un = std::sqrt(un);
      const double expected = vn == 0 || un == 0 ? 0.0 : dot / (vn * un) / 0.1;
      CHECK(got(t, u) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("the loss only listens to masked frames") {
  EncoderConfig cfg = tiny_config();
  HubertModel model(cfg, tiny_codebook(4, cfg.feat_dim, cfg.proj_dim, 8), 5);
  auto features = make_features(9, cfg.feat_dim, 55);
  std::vector<int> labels = {0, 1, 2, 3, 0, 1, 2, 3, 0};
  std::vector<uint8_t> mask = {1, 0, 1, 0, 1, 0, 1, 0, 1};

  ser::numerics::Tape t1;
  const double base =
      t1.value(model.build_pretrain_loss(t1, features, labels, mask, nullptr))(
          0, 0);

  // Corrupting every unmasked label must not budge a single bit.
  std::vector<int> corrupted = labels;
  for (size_t i = 0; i < mask.size(); ++i)
    if (!mask[i]) corrupted[i] = (labels[i] + 2) % 4;
  ser::numerics::Tape t2;
  const double same = t2.value(
      model.build_pretrain_loss(t2, features, corrupted, mask, nullptr))(0, 0);
  CHECK(base == same);

  // Masked labels do matter.
  std::vector<int> moved = labels;
  moved[0] = (labels[0] + 1) % 4;
  ser::numerics::Tape t3;
  const double shifted = t3.value(
      model.build_pretrain_loss(t3, features, moved, mask, nullptr))(0, 0);
  CHECK(base != shifted);

  std::vector<uint8_t> none(9, 0);
  ser::numerics::Tape t4;
  CHECK_THROWS_AS(model.build_pretrain_loss(t4, features, labels, none,
                                            nullptr),
                  StructuralError);
  std::vector<int> bad = labels;
  bad[2] = 4;
  ser::numerics::Tape t5;
  CHECK_THROWS_AS(model.build_pretrain_loss(t5, features, bad, mask, nullptr),
                  DataError);
}

TEST_CASE("masked cross entropy agrees with a per-frame oracle") {
  // Uniform logits over k=50 units cost ln 50 regardless of the labels.
  ser::numerics::Tape tape;
  auto logits = tape.leaf(Matrix(6, 50));
  std::vector<int> labels(6, 17);
  std::vector<uint8_t> mask = {1, 1, 0, 1, 0, 1};
  auto loss = tape.masked_cross_entropy(logits, labels, mask);
  CHECK(tape.value(loss)(0, 0) ==
        doctest::Approx(std::log(50.0)).epsilon(1e-12));

  // Confident on the masked frames, garbage elsewhere: loss vanishes.
  Matrix sure(4, 5);
  Rng rng(3);
  for (long i = 0; i < sure.size(); ++i) sure.data()[i] = rng.uniform(-5, 5);
  std::vector<int> l2 = {2, 0, 4, 1};
  std::vector<uint8_t> m2 = {1, 0, 1, 0};
  sure(0, 2) = 60.0;
  sure(2, 4) = 60.0;
  ser::numerics::Tape t2;
  auto confident = t2.masked_cross_entropy(t2.leaf(sure), l2, m2);
  CHECK(t2.value(confident)(0, 0) <= 1e-6);

  // Random case against an explicit log-sum-exp average.
  Matrix raw = random_matrix(5, 4, 77, -2.0, 2.0);
  std::vector<int> l3 = {3, 1, 0, 2, 1};
  std::vector<uint8_t> m3 = {0, 1, 1, 0, 1};
  double expected = 0;
  int count = 0;
  for (int t = 0; t < 5; ++t) {
    if (!m3[t]) continue;
    double mx = raw(t, 0);
    for (int j = 1; j < 4; ++j) mx = std::max(mx, raw(t, j));
    double lse = 0;
    for (int j = 0; j < 4; ++j) lse += std::exp(raw(t, j) - mx);
    expected += mx + std::log(lse) - raw(t, l3[t]);
    ++count;
  }
  expected /= count;
  ser::numerics::Tape t3;
  auto got = t3.masked_cross_entropy(t3.leaf(raw), l3, m3);
  CHECK(t3.value(got)(0, 0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("pretraining loss passes grad_check end to end") {
  EncoderConfig cfg = tiny_config();
  HubertModel model(cfg, tiny_codebook(4, cfg.feat_dim, cfg.proj_dim, 14), 9);
  auto features = make_features(7, cfg.feat_dim, 66);
  std::vector<int> labels = {0, 1, 2, 3, 2, 1, 0};
  std::vector<uint8_t> mask = {1, 0, 0, 1, 1, 0, 1};

  std::vector<double> flat;
  for (Matrix *p : model.pretrain_parameters())
    flat.insert(flat.end(), p->data(), p->data() + p->size());

  ser::numerics::Tape tape;
  std::vector<ser::numerics::Tape::Var> params;
  auto loss = model.build_pretrain_loss(tape, features, labels, mask, &params);
  tape.backward(loss);
  std::vector<double> analytic;
  for (auto v : params) {
    const Matrix &g = tape.grad(v);
    analytic.insert(analytic.end(), g.data(), g.data() + g.size());
  }
  REQUIRE(analytic.size() == flat.size());

  HubertModel probe = model;
  auto f = [&](std::span<const double> p) {
    size_t off = 0;
    for (Matrix *mp : probe.pretrain_parameters()) {
      std::copy(p.begin() + off, p.begin() + off + mp->size(), mp->data());
      off += static_cast<size_t>(mp->size());
    }
    ser::numerics::Tape t;
    return t.value(
        probe.build_pretrain_loss(t, features, labels, mask, nullptr))(0, 0);
  };
  auto report = ser::numerics::grad_check(f, flat, analytic, 1e-4);
  CAPTURE(report.message);
  CHECK(report.passed);
}

TEST_CASE("finetuning loss passes grad_check with a live head") {
  EncoderConfig cfg = tiny_config();
  HubertModel model(cfg, tiny_codebook(4, cfg.feat_dim, cfg.proj_dim, 15), 9);
  // The classifier head ships zero-initialized, which would zero out the
  // encoder gradients; give it mass so the whole path is exercised.
  for (Matrix *p : model.finetune_parameters()) {
    if (p->rows() == cfg.model_dim && p->cols() == 4)
      *p = random_matrix(cfg.model_dim, 4, 81, -0.3, 0.3);
    if (p->rows() == 1 && p->cols() == 4)
      *p = random_matrix(1, 4, 82, -0.1, 0.1);
  }
  auto features = make_features(6, cfg.feat_dim, 67);

  std::vector<double> flat;
  for (Matrix *p : model.finetune_parameters())
    flat.insert(flat.end(), p->data(), p->data() + p->size());

  ser::numerics::Tape tape;
  std::vector<ser::numerics::Tape::Var> params;
  auto loss = model.build_finetune_loss(tape, features, 2, &params);
  tape.backward(loss);
  std::vector<double> analytic;
  for (auto v : params) {
    const Matrix &g = tape.grad(v);
    analytic.insert(analytic.end(), g.data(), g.data() + g.size());
  }
  REQUIRE(analytic.size() == flat.size());

  HubertModel probe = model;
  auto f = [&](std::span<const double> p) {
    size_t off = 0;
    for (Matrix *mp : probe.finetune_parameters()) {
      std::copy(p.begin() + off, p.begin() + off + mp->size(), mp->data());
      off += static_cast<size_t>(mp->size());
    }
    ser::numerics::Tape t;
    return t.value(probe.build_finetune_loss(t, features, 2, nullptr))(0, 0);
  };
  auto report = ser::numerics::grad_check(f, flat, analytic, 1e-4);
  CAPTURE(report.message);
  CHECK(report.passed);
}

TEST_CASE("an untrained classifier head predicts the uniform distribution") {
  EncoderConfig cfg = tiny_config();
  HubertModel model(cfg, tiny_codebook(3, cfg.feat_dim, cfg.proj_dim, 2), 21);
  auto pred = model.predict(make_features(8, cfg.feat_dim, 44));
  REQUIRE(pred.probabilities.size() == 4);
  for (double p : pred.probabilities)
    CHECK(p == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("refining units is deterministic and moves the labels") {
  EncoderConfig cfg = tiny_config();
  HubertModel model(cfg, tiny_codebook(6, cfg.feat_dim, cfg.proj_dim, 1), 33);
  std::vector<FeatureMatrix> features;
  for (uint64_t s = 0; s < 3; ++s)
    features.push_back(make_features(40, cfg.feat_dim, 200 + s));

  auto a = ser::hubert::refine_units(model, features, 6, 4);
  auto b = ser::hubert::refine_units(model, features, 6, 4);
  CHECK(std::memcmp(a.codebook.centroids.data(), b.codebook.centroids.data(),
                    sizeof(double) * a.codebook.centroids.size()) == 0);
  CHECK(a.labels == b.labels);
  // Middle-layer states live in model space, not MFCC space.
  CHECK(a.codebook.centroids.cols() == cfg.model_dim);

  auto mfcc_space = ser::hubert::discover_units(features, 6, cfg.proj_dim, 4);
  int moved = 0, total = 0;
  for (size_t u = 0; u < features.size(); ++u)
    for (size_t t = 0; t < a.labels[u].size(); ++t) {
      moved += a.labels[u][t] != mfcc_space.labels[u][t];
      ++total;
    }
  CHECK(total == 120);
  CHECK(moved > 0);
}

TEST_CASE("pretraining drives the masked loss down and reclusters") {
  auto dir = scratch_dir() / "pretrain";
  auto manifest = tone_manifest(dir, 2, 0);  // 8 utterances, train only
  manifest.resize(5);

  ser::hubert::PretrainConfig cfg;
  cfg.iterations = 2;
  cfg.steps_per_iteration = 150;
  cfg.k = 8;
  cfg.encoder.model_dim = 32;
  cfg.encoder.layers = 2;
  cfg.encoder.heads = 2;
  cfg.encoder.ffn_dim = 64;
  cfg.encoder.proj_dim = 32;
  auto result = ser::hubert::pretrain_hubert(manifest, cfg);

  REQUIRE(result.log.size() == 300);
  CHECK(result.log.front().step == 1);
  CHECK(result.log.back().step == 300);
  CHECK(result.log.back().loss < result.log.front().loss);
  double head = 0, tail = 0;
  for (int i = 0; i < 5; ++i) {
    head += result.log[i].loss;
    tail += result.log[145 + i].loss;
  }
  CHECK(tail < head);  // trend within the first iteration alone

  // Two iterations mean the codebook was rebuilt from middle-layer
  // states, whose dimension differs from the 39 MFCC coefficients.
  CHECK(result.model.codebook().centroids.cols() == 32);

  auto again = ser::hubert::pretrain_hubert(manifest, cfg);
  auto ta = result.model.all_tensors();
  auto tb = again.model.all_tensors();
  REQUIRE(ta.size() == tb.size());
  for (size_t i = 0; i < ta.size(); ++i)
    CHECK(std::memcmp(ta[i]->data(), tb[i]->data(),
                      sizeof(double) * ta[i]->size()) == 0);

  // A single iteration keeps the original MFCC-space codebook.
  ser::hubert::PretrainConfig one = cfg;
  one.iterations = 1;
  one.steps_per_iteration = 20;
  auto single = ser::hubert::pretrain_hubert(manifest, one);
  CHECK(single.model.codebook().centroids.cols() == 39);
  auto reference = ser::hubert::discover_units(
      ser::hubert::extract_features(manifest), one.k, one.encoder.proj_dim,
      one.seed);
  CHECK(std::memcmp(single.model.codebook().centroids.data(),
                    reference.codebook.centroids.data(),
                    sizeof(double) *
                        reference.codebook.centroids.size()) == 0);

  const std::string log_path = (scratch_dir() / "pretrain_log.csv").string();
  ser::hubert::write_pretrain_log_csv(result.log, log_path);
  const std::string text = ser::common::read_text_file(log_path);
  CHECK(text.rfind("step,loss\n", 0) == 0);
  char expect[64];
  std::snprintf(expect, sizeof(expect), "1,%.6f\n", result.log[0].loss);
  CHECK(text.find(expect) != std::string::npos);
}

TEST_CASE("finetuning separates the four tone classes") {
  auto dir = scratch_dir() / "finetune";
  auto manifest = tone_manifest(dir, 5, 2);

  auto features = ser::hubert::extract_features(manifest);
  EncoderConfig enc;
  enc.feat_dim = 39;
  enc.model_dim = 32;
  enc.layers = 2;
  enc.heads = 2;
  enc.ffn_dim = 64;
  enc.proj_dim = 32;
  auto units = ser::hubert::discover_units(features, 8, enc.proj_dim, 7);
  HubertModel pretrained(enc, units.codebook, 7);

  ser::hubert::FinetuneConfig cfg;
  cfg.epochs = 20;
  cfg.learning_rate = 3e-3;
  cfg.batch_size = 4;
  auto result = ser::hubert::finetune_hubert(pretrained, manifest, cfg);

  REQUIRE(result.history.size() == 20);
  CHECK(result.history.front().epoch == 1);
  CHECK(result.history.back().epoch == 20);
  CHECK(result.history.back().train_acc >= 0.9);

  CHECK(result.test_scores.kind == ser::fusion::ScoreKind::kProbability);
  REQUIRE(result.test_scores.rows.size() == 8);
  for (const auto &row : result.test_scores.rows) {
    double sum = 0;
    for (double s : row.scores) sum += s;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }

  auto table = ser::hubert::score_hubert(result.model, manifest);
  CHECK(table.rows.size() == manifest.size());
  CHECK(table.kind == ser::fusion::ScoreKind::kProbability);

  const std::string hist_path = (scratch_dir() / "finetune_hist.csv").string();
  ser::hubert::write_finetune_history_csv(result.history, hist_path);
  CHECK(ser::common::read_text_file(hist_path).rfind(
            "epoch,train_loss,train_acc,test_acc\n", 0) == 0);
}

TEST_CASE("checkpoints restore both model kinds bit for bit") {
  EncoderConfig cfg = tiny_config();
  HubertModel model(cfg, tiny_codebook(5, cfg.feat_dim, cfg.proj_dim, 3), 11);
  auto features = make_features(6, cfg.feat_dim, 90);

  for (const char *kind : {"hubert_pretrain", "hubert_classifier"}) {
    fs::path dir = scratch_dir() / (std::string("ckpt_") + kind);
    fs::remove_all(dir);
    auto ckpt = model.to_checkpoint(kind, 11);
    CHECK(ckpt.model_kind == kind);
    ser::common::save_checkpoint(ckpt, dir.string());
    auto restored = HubertModel::from_checkpoint(
        ser::common::load_checkpoint(dir.string()));
    auto ta = model.all_tensors();
    auto tb = restored.all_tensors();
    REQUIRE(ta.size() == tb.size());
    for (size_t i = 0; i < ta.size(); ++i)
      CHECK(std::memcmp(ta[i]->data(), tb[i]->data(),
                        sizeof(double) * ta[i]->size()) == 0);
    auto a = model.predict(features);
    auto b = restored.predict(features);
    CHECK(std::memcmp(a.logits.data(), b.logits.data(),
                      sizeof(double) * a.logits.size()) == 0);
  }

  CHECK_THROWS_AS(model.to_checkpoint("gcn", 1), StructuralError);
  ser::common::Checkpoint wrong;
  wrong.model_kind = "gcn";
  CHECK_THROWS_AS(HubertModel::from_checkpoint(wrong), DataError);
}
