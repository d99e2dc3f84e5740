// ser/cli/synthetic.h

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

#include "ser/datasets/manifest.h"

namespace ser::cli {

struct SyntheticOptions {
  int per_class = 40;      // utterances per emotion
  int test_per_class = 8;  // the last n of each class form the test split
  uint64_t seed = 7;
};

// Self-contained toy corpus so the whole pipeline runs offline: four
// emotions with class-distinct fundamentals (220/330/440/660 Hz, +/-2%
// jitter, alternating steady tones and upward chirps, 1 s at 16 kHz) and
// class-distinct keyword vocabularies in the transcripts. Writes
// audio/<id>.wav, manifest.csv and embeddings.txt (100-dim vectors whose
// keyword clusters are linearly separable) under out_dir. Everything is a
// pure function of the seed, including the WAV bytes.
datasets::Manifest generate_synthetic(const std::string &out_dir,
                                      const SyntheticOptions &opts);

}  // namespace ser::cli
