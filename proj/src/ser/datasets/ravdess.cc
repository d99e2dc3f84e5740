// ser/datasets/ravdess.cc

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

#include "ser/datasets/ravdess.h"

#include <cctype>
#include <cstdio>

#include "ser/common/error.h"

namespace ser::datasets {

namespace {

struct FieldSpec {
  const char *name;
  int lo, hi;
};

constexpr FieldSpec kFields[7] = {
    {"modality", 1, 3},   {"vocal_channel", 1, 2}, {"emotion", 1, 8},
    {"intensity", 1, 2},  {"statement", 1, 2},     {"repetition", 1, 2},
    {"actor", 1, 24},
};

}  // namespace

RavdessMeta parse_ravdess_filename(const std::string &name) {
  std::string base = name;
  const size_t slash = base.find_last_of("/\\");
  if (slash != std::string::npos) base = base.substr(slash + 1);

  // NN-NN-NN-NN-NN-NN-NN.wav is 24 characters.
  const std::string err_prefix = "ravdess: \"" + base + "\": ";
  if (base.size() != 24 || base.substr(20) != ".wav")
    throw DataError(err_prefix +
                    "expected 7 dash-separated 2-digit fields + \".wav\"");
  int values[7];
  for (int f = 0; f < 7; ++f) {
    const int at = f * 3;
    if (f > 0 && base[at - 1] != '-')
      throw DataError(err_prefix + "expected '-' at position " +
                      std::to_string(at - 1));
    if (!std::isdigit(static_cast<unsigned char>(base[at])) ||
        !std::isdigit(static_cast<unsigned char>(base[at + 1])))
      throw DataError(err_prefix + "field " + std::to_string(f + 1) + " (" +
                      kFields[f].name + ") at position " + std::to_string(at) +
                      " is not 2 digits");
    values[f] = (base[at] - '0') * 10 + (base[at + 1] - '0');
    if (values[f] < kFields[f].lo || values[f] > kFields[f].hi)
      throw DataError(err_prefix + kFields[f].name + " code " +
                      base.substr(at, 2) + " out of range " +
                      std::to_string(kFields[f].lo) + ".." +
                      std::to_string(kFields[f].hi));
  }

  RavdessMeta meta;
  meta.modality = values[0];
  meta.vocal_channel = values[1];
  meta.emotion_code = values[2];
  meta.intensity = values[3];
  meta.statement = values[4];
  meta.repetition = values[5];
  meta.actor = values[6];
  if (meta.emotion_code == 1 && meta.intensity == 2)
    throw DataError(err_prefix +
                    "there is no strong intensity for the 'neutral' emotion");
  return meta;
}

std::string render_ravdess_filename(const RavdessMeta &meta) {
  const int values[7] = {meta.modality,   meta.vocal_channel,
                         meta.emotion_code, meta.intensity,
                         meta.statement,  meta.repetition,
                         meta.actor};
  for (int f = 0; f < 7; ++f)
    if (values[f] < kFields[f].lo || values[f] > kFields[f].hi)
      throw StructuralError(std::string("ravdess render: ") + kFields[f].name +
                            " out of range");
  if (meta.emotion_code == 1 && meta.intensity == 2)
    throw StructuralError(
        "ravdess render: no strong intensity for the 'neutral' emotion");
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%02d-%02d-%02d-%02d-%02d-%02d-%02d.wav",
                values[0], values[1], values[2], values[3], values[4],
                values[5], values[6]);
  return buf;
}

const char *ravdess_modality_name(int code) {
  switch (code) {
    case 1: return "full-AV";
    case 2: return "video-only";
    case 3: return "audio-only";
  }
  throw StructuralError("ravdess: bad modality code");
}

const char *ravdess_channel_name(int code) {
  switch (code) {
    case 1: return "speech";
    case 2: return "song";
  }
  throw StructuralError("ravdess: bad vocal channel code");
}

const char *ravdess_emotion_name(int code) {
  switch (code) {
    case 1: return "neutral";
    case 2: return "calm";
    case 3: return "happy";
    case 4: return "sad";
    case 5: return "angry";
    case 6: return "fearful";
    case 7: return "disgust";
    case 8: return "surprised";
  }
  throw StructuralError("ravdess: bad emotion code");
}

const char *ravdess_intensity_name(int code) {
  switch (code) {
    case 1: return "normal";
    case 2: return "strong";
  }
  throw StructuralError("ravdess: bad intensity code");
}

const char *ravdess_statement_text(int code) {
  switch (code) {
    case 1: return "Kids are talking by the door";
    case 2: return "Dogs are sitting by the door";
  }
  throw StructuralError("ravdess: bad statement code");
}

}  // namespace ser::datasets
