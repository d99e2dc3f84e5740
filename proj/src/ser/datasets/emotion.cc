// ser/datasets/emotion.cc

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

#include "ser/datasets/emotion.h"

#include <array>

#include "ser/common/error.h"

namespace ser::datasets {

const char *emotion_name(EmotionLabel label) {
  switch (label) {
    case EmotionLabel::kAngry: return "angry";
    case EmotionLabel::kHappy: return "happy";
    case EmotionLabel::kNeutral: return "neutral";
    case EmotionLabel::kSad: return "sad";
  }
  throw StructuralError("emotion_name: bad label");
}

std::optional<EmotionLabel> emotion_from_name(const std::string &name) {
  for (int i = 0; i < kNumEmotions; ++i) {
    const auto label = static_cast<EmotionLabel>(i);
    if (name == emotion_name(label)) return label;
  }
  return std::nullopt;
}

MapResult map_emotion(const std::string &source, const std::string &code,
                      bool merge_excited) {
  if (source == "ravdess") {
    // Codes 01..08: neutral calm happy sad angry fearful disgust surprised.
    if (code == "05") return {EmotionLabel::kAngry, true};
    if (code == "03") return {EmotionLabel::kHappy, true};
    if (code == "01") return {EmotionLabel::kNeutral, true};
    if (code == "04") return {EmotionLabel::kSad, true};
    static const std::array<const char *, 4> rest = {"02", "06", "07", "08"};
    for (const char *c : rest)
      if (code == c) return {std::nullopt, true};
    return {std::nullopt, false};
  }
  if (source == "iemocap") {
    if (code == "ang") return {EmotionLabel::kAngry, true};
    if (code == "hap") return {EmotionLabel::kHappy, true};
    if (code == "neu") return {EmotionLabel::kNeutral, true};
    if (code == "sad") return {EmotionLabel::kSad, true};
    if (code == "exc")
      return {merge_excited ? std::optional(EmotionLabel::kHappy)
                            : std::nullopt,
              true};
    static const std::array<const char *, 6> rest = {"fru", "sur", "fea",
                                                     "dis", "oth", "xxx"};
    for (const char *c : rest)
      if (code == c) return {std::nullopt, true};
    return {std::nullopt, false};
  }
  throw StructuralError("map_emotion: unknown source \"" + source + "\"");
}

}  // namespace ser::datasets
