// ser/datasets/iemocap.h

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

#include <map>
#include <string>
#include <vector>

namespace ser::datasets {

// One row of the IEMOCAP metadata CSV (seven fixed columns).
struct IemocapRecord {
  int session = 0;          // 1..5
  std::string method;       // "script" or "impro"
  std::string gender;       // "M" or "F"
  std::string emotion;      // 3-letter code, e.g. "ang"
  int n_annotators = 0;
  int agreement = 0;        // 2..4, <= n_annotators
  std::string path;         // audio path relative to the corpus root
};

// Parses a metadata CSV whose header must be exactly
// session,method,gender,emotion,n_annotators,agreement,path.
// Violated field invariants raise DataError naming the row.
std::vector<IemocapRecord> load_iemocap_csv(const std::string &path);

// Session-based split: the held-out session is test, the rest train.
// Default follows the usual protocol of testing on session 5; other values
// give the 5-fold rotation.
enum class Split { kTrain, kTest };
Split split_iemocap(const IemocapRecord &record, int held_out_session = 5);

// Transcripts TSV: utterance_id<TAB>text per line.
std::map<std::string, std::string> load_transcripts_tsv(
    const std::string &path);

// Utterance id derived from the audio path: basename minus extension.
std::string iemocap_utterance_id(const std::string &path);

}  // namespace ser::datasets
