// ser/cli/synthetic.cc

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

#include "ser/cli/synthetic.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <vector>

#include "ser/common/error.h"
#include "ser/common/rng.h"
#include "ser/common/textio.h"
#include "ser/datasets/emotion.h"
#include "ser/dsp/wav.h"

namespace ser::cli {

namespace {

constexpr int kSampleRate = 16000;
constexpr int kEmbeddingDim = 100;
constexpr double kFundamentals[4] = {220.0, 330.0, 440.0, 660.0};

const char *kKeywords[4][4] = {
    {"furious", "rage", "seething", "storming"},
    {"gleeful", "beaming", "cheering", "sunny"},
    {"routine", "ordinary", "steady", "plain"},
    {"mournful", "weeping", "gloomy", "sorrowful"},
};

// Two keyword slots per template; fillers are shared across classes so
// the text branch has to learn the keywords, not the scaffolding.
const char *kTemplates[4] = {
    "the %s voice kept %s through the hall",
    "%s and %s all afternoon",
    "a %s tone under the %s morning",
    "they sounded %s almost %s today",
};

dsp::Waveform make_tone(int emotion, int index, common::Rng &rng) {
  const double f0 =
      kFundamentals[emotion] * (1.0 + rng.uniform(-0.02, 0.02));
  const bool chirp = (index % 2 == 1);
  dsp::Waveform w;
  w.sample_rate = kSampleRate;
  w.samples.resize(kSampleRate);  // 1 second
  const int fade = kSampleRate / 40;  // 25 ms edges against clicks
  for (int n = 0; n < kSampleRate; ++n) {
    const double t = static_cast<double>(n) / kSampleRate;
    // Chirps sweep the fundamental up 10% over the second.
    const double phase =
        2.0 * M_PI * (chirp ? f0 * t + 0.05 * f0 * t * t : f0 * t);
    double s = 0.55 * std::sin(phase) + 0.2 * std::sin(2.0 * phase) +
               0.01 * rng.gauss();
    double ramp = 1.0;
    if (n < fade) ramp = static_cast<double>(n) / fade;
    if (kSampleRate - 1 - n < fade)
      ramp = std::min(ramp, static_cast<double>(kSampleRate - 1 - n) / fade);
    w.samples[n] = 0.9 * s * ramp;
  }
  return w;
}

std::string make_transcript(int emotion, common::Rng &rng) {
  const char *kw1 = kKeywords[emotion][rng.uniform_int(4)];
  const char *kw2 = kKeywords[emotion][rng.uniform_int(4)];
  const char *tmpl = kTemplates[rng.uniform_int(4)];
  char buf[160];
  std::snprintf(buf, sizeof(buf), tmpl, kw1, kw2);
  return buf;
}

void write_embeddings(const std::string &path,
                      const std::set<std::string> &vocabulary,
                      uint64_t seed) {
  // Keywords sit on one of four orthogonal 25-dim blocks plus noise;
  // fillers are pure low-amplitude noise. Each word's vector depends only
  // on the word and the seed, never on generation order.
  std::map<std::string, int> keyword_class;
  for (int c = 0; c < 4; ++c)
    for (int i = 0; i < 4; ++i) keyword_class[kKeywords[c][i]] = c;

  std::string out;
  char buf[32];
  for (const std::string &word : vocabulary) {
    common::Rng rng(common::fnv1a64(word) ^ seed);
    std::vector<double> v(kEmbeddingDim);
    for (double &x : v) x = 0.2 * rng.gauss();
    const auto it = keyword_class.find(word);
    if (it != keyword_class.end()) {
      const int block = it->second * (kEmbeddingDim / 4);
      for (int d = block; d < block + kEmbeddingDim / 4; ++d) v[d] += 0.5;
    }
    out += word;
    for (double x : v) {
      std::snprintf(buf, sizeof(buf), " %.6f", x);
      out += buf;
    }
    out += "\n";
  }
  common::write_text_file(path, out);
}

}  // namespace

datasets::Manifest generate_synthetic(const std::string &out_dir,
                                      const SyntheticOptions &opts) {
  if (opts.per_class < 1)
    throw StructuralError("generate_synthetic: per_class must be >= 1");
  if (opts.test_per_class < 0 || opts.test_per_class >= opts.per_class)
    throw StructuralError(
        "generate_synthetic: test_per_class must be in [0, per_class)");

  namespace fs = std::filesystem;
  const fs::path root(out_dir);
  fs::create_directories(root / "audio");

  datasets::Manifest manifest;
  std::set<std::string> vocabulary;
  for (int emotion = 0; emotion < datasets::kNumEmotions; ++emotion) {
    const std::string name = datasets::emotion_name(
        static_cast<datasets::EmotionLabel>(emotion));
    for (int index = 0; index < opts.per_class; ++index) {
      char id[64];
      std::snprintf(id, sizeof(id), "syn_%s_%02d", name.c_str(), index);
      // Per-utterance stream keyed by id: file order never shifts the draw.
      common::Rng rng(opts.seed ^ common::fnv1a64(id));

      datasets::Utterance u;
      u.id = id;
      u.label = name;
      u.source = "synthetic";
      u.split =
          index >= opts.per_class - opts.test_per_class ? "test" : "train";
      u.transcript = make_transcript(emotion, rng);
      const fs::path wav = root / "audio" / (std::string(id) + ".wav");
      dsp::write_wav_pcm16(wav.string(), make_tone(emotion, index, rng));
      u.audio_path = wav.string();
      manifest.push_back(std::move(u));

      size_t at = 0;
      const std::string &text = manifest.back().transcript;
      while (at < text.size()) {
        size_t space = text.find(' ', at);
        if (space == std::string::npos) space = text.size();
        if (space > at) vocabulary.insert(text.substr(at, space - at));
        at = space + 1;
      }
    }
  }

  datasets::write_manifest(manifest, (root / "manifest.csv").string());
  write_embeddings((root / "embeddings.txt").string(), vocabulary, opts.seed);
  return manifest;
}

}  // namespace ser::cli
