// ser/datasets/manifest.h

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
#include <vector>

namespace ser::datasets {

// One manifest row. label is the emotion name ("angry".."sad" for the
// canonical task; other corpus emotions appear verbatim under
// --all-classes and are rejected at training time).
struct Utterance {
  std::string id;
  std::string audio_path;
  std::string transcript;
  std::string label;
  std::string split;   // "train" or "test"
  std::string source;  // "ravdess", "iemocap" or "synthetic"
};

using Manifest = std::vector<Utterance>;

struct BuildOptions {
  bool all_classes = false;   // keep utterances outside the 4-class task
  bool merge_excited = true;  // IEMOCAP 'exc' -> happy
  int min_agreement = 2;      // IEMOCAP agreement threshold (2 keeps all)
  int held_out_session = 5;   // IEMOCAP test session
  int test_actor_start = 21;  // RAVDESS actors >= this are the test split
};

struct BuildReport {
  int scanned = 0;
  int kept = 0;
  int skipped_label = 0;       // outside the 4-class task
  int skipped_unreadable = 0;  // bad filename / missing audio
  std::vector<std::string> warnings;
};

// Scans dir recursively for .wav files named per the corpus grammar.
// Unparseable names and files mapping outside the task are skipped with a
// warning; a directory containing no audio at all raises DataError. Rows
// are sorted by id.
Manifest build_ravdess_manifest(const std::string &dir,
                                const BuildOptions &options,
                                BuildReport *report);

// Builds from a metadata CSV plus optional transcripts TSV (empty path =
// no transcripts). Relative audio paths resolve against audio_root; rows
// whose audio file is missing are skipped with a warning.
Manifest build_iemocap_manifest(const std::string &metadata_csv,
                                const std::string &transcripts_tsv,
                                const std::string &audio_root,
                                const BuildOptions &options,
                                BuildReport *report);

// CSV header: id,audio_path,transcript,label,split,source. Writing is
// byte-deterministic; loading validates the header, unique ids and the
// split/source vocabularies.
void write_manifest(const Manifest &manifest, const std::string &path);
Manifest load_manifest(const std::string &path);

}  // namespace ser::datasets
