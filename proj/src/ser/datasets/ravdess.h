// ser/datasets/ravdess.h

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

#include <string>

namespace ser::datasets {

// Decoded RAVDESS filename, e.g. 03-01-06-01-02-01-12.wav. Seven 2-digit
// fields: modality, vocal channel, emotion, intensity, statement,
// repetition, actor.
struct RavdessMeta {
  int modality = 0;       // 1 full-AV, 2 video-only, 3 audio-only
  int vocal_channel = 0;  // 1 speech, 2 song
  int emotion_code = 0;   // 1..8
  int intensity = 0;      // 1 normal, 2 strong
  int statement = 0;      // 1..2
  int repetition = 0;     // 1..2
  int actor = 0;          // 1..24; odd actors are male

  bool male() const { return actor % 2 == 1; }
};

// Accepts a bare filename or a path (directories are stripped). Raises
// DataError naming the field position for malformed names, the field for
// out-of-range codes, and the neutral/strong rule for code combination
// 01+02 (the corpus defines no strong intensity for the neutral emotion).
RavdessMeta parse_ravdess_filename(const std::string &name);

// Inverse of parse_ravdess_filename on valid metadata.
std::string render_ravdess_filename(const RavdessMeta &meta);

const char *ravdess_modality_name(int code);   // "full-AV" etc.
const char *ravdess_channel_name(int code);    // "speech"/"song"
const char *ravdess_emotion_name(int code);    // "neutral".."surprised"
const char *ravdess_intensity_name(int code);  // "normal"/"strong"
const char *ravdess_statement_text(int code);  // the two fixed sentences

}  // namespace ser::datasets
