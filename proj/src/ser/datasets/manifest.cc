// ser/datasets/manifest.cc

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

#include "ser/datasets/manifest.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>

#include "ser/common/csv.h"
#include "ser/common/error.h"
#include "ser/common/textio.h"
#include "ser/datasets/emotion.h"
#include "ser/datasets/iemocap.h"
#include "ser/datasets/ravdess.h"

namespace ser::datasets {

namespace fs = std::filesystem;

namespace {

const char *kHeader[6] = {"id",    "audio_path", "transcript",
                          "label", "split",      "source"};

void sort_and_check_ids(Manifest &manifest) {
  std::sort(manifest.begin(), manifest.end(),
            [](const Utterance &a, const Utterance &b) { return a.id < b.id; });
  for (size_t i = 1; i < manifest.size(); ++i)
    if (manifest[i].id == manifest[i - 1].id)
      throw DataError("manifest: duplicate utterance id \"" + manifest[i].id +
                      "\"");
}

void warn(BuildReport *report, std::string message) {
  if (report) report->warnings.push_back(std::move(message));
}

}  // namespace

Manifest build_ravdess_manifest(const std::string &dir,
                                const BuildOptions &options,
                                BuildReport *report) {
  if (!fs::is_directory(dir))
    throw DataError("ravdess: not a directory: " + dir);
  std::vector<fs::path> wavs;
  for (const auto &entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".wav")
      wavs.push_back(entry.path());
  if (wavs.empty())
    throw DataError("ravdess: no .wav files under " + dir);
  std::sort(wavs.begin(), wavs.end());

  Manifest manifest;
  for (const fs::path &wav : wavs) {
    if (report) ++report->scanned;
    RavdessMeta meta;
    try {
      meta = parse_ravdess_filename(wav.filename().string());
    } catch (const DataError &e) {
      if (report) ++report->skipped_unreadable;
      warn(report, std::string("skipped: ") + e.what());
      continue;
    }
    char code[3];
    std::snprintf(code, sizeof(code), "%02d", meta.emotion_code);
    const MapResult mapped = map_emotion("ravdess", code);
    std::string label;
    if (mapped.label) {
      label = emotion_name(*mapped.label);
    } else if (options.all_classes) {
      label = ravdess_emotion_name(meta.emotion_code);
    } else {
      if (report) ++report->skipped_label;
      warn(report, wav.filename().string() + ": emotion '" +
                       ravdess_emotion_name(meta.emotion_code) +
                       "' outside the 4-class task, skipped");
      continue;
    }
    Utterance u;
    u.id = wav.stem().string();
    u.audio_path = wav.string();
    u.transcript = ravdess_statement_text(meta.statement);
    u.label = label;
    u.split = meta.actor >= options.test_actor_start ? "test" : "train";
    u.source = "ravdess";
    manifest.push_back(std::move(u));
    if (report) ++report->kept;
  }
  sort_and_check_ids(manifest);
  return manifest;
}

Manifest build_iemocap_manifest(const std::string &metadata_csv,
                                const std::string &transcripts_tsv,
                                const std::string &audio_root,
                                const BuildOptions &options,
                                BuildReport *report) {
  const std::vector<IemocapRecord> records = load_iemocap_csv(metadata_csv);
  if (records.empty())
    throw DataError("iemocap: " + metadata_csv + " has no data rows");
  std::map<std::string, std::string> transcripts;
  if (!transcripts_tsv.empty())
    transcripts = load_transcripts_tsv(transcripts_tsv);

  Manifest manifest;
  for (const IemocapRecord &rec : records) {
    if (report) ++report->scanned;
    if (rec.agreement < options.min_agreement) {
      if (report) ++report->skipped_label;
      warn(report, rec.path + ": agreement " + std::to_string(rec.agreement) +
                       " below threshold, skipped");
      continue;
    }
    const MapResult mapped =
        map_emotion("iemocap", rec.emotion, options.merge_excited);
    std::string label;
    if (mapped.label) {
      label = emotion_name(*mapped.label);
    } else if (options.all_classes && mapped.known_code) {
      label = rec.emotion;
    } else {
      if (report) ++report->skipped_label;
      warn(report, rec.path + ": emotion '" + rec.emotion +
                       (mapped.known_code ? "' outside the 4-class task"
                                          : "' unknown") +
                       ", skipped");
      continue;
    }
    const fs::path audio = audio_root.empty()
                               ? fs::path(rec.path)
                               : fs::path(audio_root) / rec.path;
    if (!fs::is_regular_file(audio)) {
      if (report) ++report->skipped_unreadable;
      warn(report, audio.string() + ": audio missing, skipped");
      continue;
    }
    Utterance u;
    u.id = iemocap_utterance_id(rec.path);
    u.audio_path = audio.string();
    const auto t = transcripts.find(u.id);
    u.transcript = t != transcripts.end() ? t->second : "";
    u.label = label;
    u.split = split_iemocap(rec, options.held_out_session) == Split::kTest
                  ? "test"
                  : "train";
    u.source = "iemocap";
    manifest.push_back(std::move(u));
    if (report) ++report->kept;
  }
  sort_and_check_ids(manifest);
  return manifest;
}

void write_manifest(const Manifest &manifest, const std::string &path) {
  std::string out;
  {
    std::vector<std::string> header(kHeader, kHeader + 6);
    out += common::csv_join(header);
    out.push_back('\n');
  }
  for (const Utterance &u : manifest) {
    const std::vector<std::string> fields = {u.id,    u.audio_path,
                                             u.transcript, u.label,
                                             u.split, u.source};
    out += common::csv_join(fields);
    out.push_back('\n');
  }
  common::write_text_file(path, out);
}

Manifest load_manifest(const std::string &path) {
  const auto rows = common::parse_csv(common::read_text_file(path));
  if (rows.empty()) throw DataError("manifest: " + path + " is empty");
  if (rows[0].size() != 6)
    throw DataError("manifest: " + path + ": expected 6 header columns");
  for (int i = 0; i < 6; ++i)
    if (rows[0][i] != kHeader[i])
      throw DataError("manifest: " + path + ": header column " +
                      std::to_string(i + 1) + " is \"" + rows[0][i] +
                      "\", expected \"" + kHeader[i] + "\"");
  Manifest manifest;
  std::set<std::string> ids;
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto &row = rows[r];
    if (row.size() != 6)
      throw DataError("manifest: " + path + " row " + std::to_string(r + 1) +
                      ": expected 6 fields, got " +
                      std::to_string(row.size()));
    Utterance u{row[0], row[1], row[2], row[3], row[4], row[5]};
    if (u.id.empty())
      throw DataError("manifest: row " + std::to_string(r + 1) + ": empty id");
    if (!ids.insert(u.id).second)
      throw DataError("manifest: duplicate utterance id \"" + u.id + "\"");
    if (u.split != "train" && u.split != "test")
      throw DataError("manifest: row " + std::to_string(r + 1) +
                      ": split must be train or test, got \"" + u.split +
                      "\"");
    if (u.source != "ravdess" && u.source != "iemocap" &&
        u.source != "synthetic")
      throw DataError("manifest: row " + std::to_string(r + 1) +
                      ": unknown source \"" + u.source + "\"");
    manifest.push_back(std::move(u));
  }
  return manifest;
}

}  // namespace ser::datasets
