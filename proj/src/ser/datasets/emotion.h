// ser/datasets/emotion.h

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

namespace ser::datasets {

// The canonical 4-class task. Class ids are fixed; score tables, confusion
// matrices and fusion all index by them.
enum class EmotionLabel : int {
  kAngry = 0,
  kHappy = 1,
  kNeutral = 2,
  kSad = 3,
};

inline constexpr int kNumEmotions = 4;

const char *emotion_name(EmotionLabel label);
std::optional<EmotionLabel> emotion_from_name(const std::string &name);

// Outcome of mapping a dataset-native emotion code onto the 4-class task.
// label empty means the utterance is skipped; known_code distinguishes
// "valid code outside the task" from "never seen this code" so callers can
// warn on the latter.
struct MapResult {
  std::optional<EmotionLabel> label;
  bool known_code = false;
};

// source is "ravdess" (2-digit codes) or "iemocap" (3-letter codes).
// merge_excited folds IEMOCAP 'exc' into happy, the common 4-class
// convention. Unknown source raises StructuralError.
MapResult map_emotion(const std::string &source, const std::string &code,
                      bool merge_excited = true);

}  // namespace ser::datasets
