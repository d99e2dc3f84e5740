// ser/tests/test_datasets.cc

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

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "ser/common/error.h"
#include "ser/common/textio.h"
#include "ser/datasets/emotion.h"
#include "ser/datasets/iemocap.h"
#include "ser/datasets/manifest.h"
#include "ser/datasets/ravdess.h"
#include "ser/dsp/wav.h"

using ser::DataError;
using ser::StructuralError;
using ser::datasets::EmotionLabel;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string &leaf) {
  fs::path dir = fs::temp_directory_path() / "ser_duo_test_datasets" / leaf;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_tone(const fs::path &path) {
  ser::dsp::Waveform w;
  w.sample_rate = 16000;
  w.samples.resize(800);
  for (size_t i = 0; i < w.samples.size(); ++i)
    w.samples[i] = 0.5 * std::sin(0.05 * static_cast<double>(i));
  ser::dsp::write_wav_pcm16(path.string(), w);
}

}  // namespace

TEST_CASE("the corpus example filename decodes field by field") {
  auto meta = ser::datasets::parse_ravdess_filename("03-01-06-01-02-01-12.wav");
  CHECK(meta.modality == 3);
  CHECK(ser::datasets::ravdess_modality_name(meta.modality) ==
        std::string("audio-only"));
  CHECK(meta.vocal_channel == 1);
  CHECK(ser::datasets::ravdess_channel_name(meta.vocal_channel) ==
        std::string("speech"));
  CHECK(meta.emotion_code == 6);
  CHECK(ser::datasets::ravdess_emotion_name(meta.emotion_code) ==
        std::string("fearful"));
  CHECK(meta.intensity == 1);
  CHECK(ser::datasets::ravdess_intensity_name(meta.intensity) ==
        std::string("normal"));
  CHECK(meta.statement == 2);
  CHECK(ser::datasets::ravdess_statement_text(meta.statement) ==
        std::string("Dogs are sitting by the door"));
  CHECK(meta.repetition == 1);
  CHECK(meta.actor == 12);
  CHECK(!meta.male());
}

TEST_CASE("all-minimum codes decode to neutral male actor 1") {
  auto meta = ser::datasets::parse_ravdess_filename("03-01-01-01-01-01-01.wav");
  CHECK(meta.emotion_code == 1);
  CHECK(ser::datasets::ravdess_emotion_name(meta.emotion_code) ==
        std::string("neutral"));
  CHECK(meta.actor == 1);
  CHECK(meta.male());
  CHECK(meta.statement == 1);
  CHECK(ser::datasets::ravdess_statement_text(1) ==
        std::string("Kids are talking by the door"));
}

TEST_CASE("neutral with strong intensity is rejected") {
  CHECK_THROWS_AS(
      ser::datasets::parse_ravdess_filename("03-01-01-02-01-01-01.wav"),
      DataError);
  try {
    ser::datasets::parse_ravdess_filename("03-01-01-02-01-01-01.wav");
  } catch (const DataError &e) {
    const std::string msg = e.what();
    CHECK(msg.find("neutral") != std::string::npos);
    CHECK(msg.find("strong") != std::string::npos);
  }
}

TEST_CASE("malformed names fail and paths are stripped") {
  CHECK_THROWS_AS(
      ser::datasets::parse_ravdess_filename("03-01-06-01-02-01.wav"),
      DataError);
  CHECK_THROWS_AS(
      ser::datasets::parse_ravdess_filename("3-01-06-01-02-01-12.wav"),
      DataError);
  CHECK_THROWS_AS(
      ser::datasets::parse_ravdess_filename("03-01-09-01-01-01-01.wav"),
      DataError);
  CHECK_THROWS_AS(
      ser::datasets::parse_ravdess_filename("03-01-06-01-02-01-25.wav"),
      DataError);
  CHECK_THROWS_AS(
      ser::datasets::parse_ravdess_filename("03-01-06-01-02-01-00.wav"),
      DataError);
  CHECK_THROWS_AS(ser::datasets::parse_ravdess_filename("notes.txt"),
                  DataError);

  auto meta = ser::datasets::parse_ravdess_filename(
      "corpus/Actor_12/03-01-06-01-02-01-12.wav");
  CHECK(meta.actor == 12);
}

TEST_CASE("render and parse are inverse over every valid combination") {
  int valid = 0, rejected = 0;
  for (int modality = 1; modality <= 3; ++modality)
    for (int channel = 1; channel <= 2; ++channel)
      for (int emotion = 1; emotion <= 8; ++emotion)
        for (int intensity = 1; intensity <= 2; ++intensity)
          for (int statement = 1; statement <= 2; ++statement)
            for (int repetition = 1; repetition <= 2; ++repetition)
              for (int actor = 1; actor <= 24; ++actor) {
                ser::datasets::RavdessMeta meta;
                meta.modality = modality;
                meta.vocal_channel = channel;
                meta.emotion_code = emotion;
                meta.intensity = intensity;
                meta.statement = statement;
                meta.repetition = repetition;
                meta.actor = actor;
                if (emotion == 1 && intensity == 2) {
                  // Both directions refuse the neutral/strong combination,
                  // so assemble the name by hand for the parse side.
                  CHECK_THROWS_AS(ser::datasets::render_ravdess_filename(meta),
                                  StructuralError);
                  char name[32];
                  std::snprintf(name, sizeof(name),
                                "%02d-%02d-01-02-%02d-%02d-%02d.wav",
                                modality, channel, statement, repetition,
                                actor);
                  CHECK_THROWS_AS(ser::datasets::parse_ravdess_filename(name),
                                  DataError);
                  ++rejected;
                  continue;
                }
                const std::string name =
                    ser::datasets::render_ravdess_filename(meta);
                auto back = ser::datasets::parse_ravdess_filename(name);
                CHECK(back.modality == modality);
                CHECK(back.vocal_channel == channel);
                CHECK(back.emotion_code == emotion);
                CHECK(back.intensity == intensity);
                CHECK(back.statement == statement);
                CHECK(back.repetition == repetition);
                CHECK(back.actor == actor);
                CHECK(ser::datasets::render_ravdess_filename(back) == name);
                ++valid;
              }
  CHECK(valid == 8640);
  CHECK(rejected == 576);
}

TEST_CASE("emotion names round-trip and reject strangers") {
  for (int i = 0; i < ser::datasets::kNumEmotions; ++i) {
    const auto label = static_cast<EmotionLabel>(i);
    auto back = ser::datasets::emotion_from_name(
        ser::datasets::emotion_name(label));
    REQUIRE(back.has_value());
    CHECK(*back == label);
  }
  CHECK(!ser::datasets::emotion_from_name("fearful").has_value());
  CHECK(!ser::datasets::emotion_from_name("").has_value());
}

TEST_CASE("emotion code mapping follows the 4-class table") {
  auto angry = ser::datasets::map_emotion("ravdess", "05");
  REQUIRE(angry.label.has_value());
  CHECK(*angry.label == EmotionLabel::kAngry);
  CHECK(*ser::datasets::map_emotion("ravdess", "03").label ==
        EmotionLabel::kHappy);
  CHECK(*ser::datasets::map_emotion("ravdess", "01").label ==
        EmotionLabel::kNeutral);
  CHECK(*ser::datasets::map_emotion("ravdess", "04").label ==
        EmotionLabel::kSad);

  auto fearful = ser::datasets::map_emotion("ravdess", "06");
  CHECK(!fearful.label.has_value());
  CHECK(fearful.known_code);

  auto fru = ser::datasets::map_emotion("iemocap", "fru");
  CHECK(!fru.label.has_value());
  CHECK(fru.known_code);

  CHECK(*ser::datasets::map_emotion("iemocap", "ang").label ==
        EmotionLabel::kAngry);
  CHECK(*ser::datasets::map_emotion("iemocap", "exc", true).label ==
        EmotionLabel::kHappy);
  CHECK(!ser::datasets::map_emotion("iemocap", "exc", false).label.has_value());

  auto unknown = ser::datasets::map_emotion("iemocap", "zzz");
  CHECK(!unknown.label.has_value());
  CHECK(!unknown.known_code);

  CHECK_THROWS_AS(ser::datasets::map_emotion("librispeech", "ang"),
                  StructuralError);
}

TEST_CASE("session split defaults to testing on session five") {
  ser::datasets::IemocapRecord record;
  record.session = 5;
  CHECK(ser::datasets::split_iemocap(record) == ser::datasets::Split::kTest);
  record.session = 1;
  CHECK(ser::datasets::split_iemocap(record) == ser::datasets::Split::kTrain);

  // Rotation: held-out session 2 flips exactly session 2 to test.
  for (int s = 1; s <= 5; ++s) {
    record.session = s;
    const auto split = ser::datasets::split_iemocap(record, 2);
    CHECK((split == ser::datasets::Split::kTest) == (s == 2));
  }
}

TEST_CASE("iemocap csv loads and validates its seven columns") {
  fs::path dir = scratch_dir("iemocap_csv");
  const std::string good =
      "session,method,gender,emotion,n_annotators,agreement,path\n"
      "1,impro,F,ang,3,2,Session1/a1.wav\n"
      "5,script,M,exc,4,3,Session5/b2.wav\n";
  const std::string path = (dir / "meta.csv").string();
  ser::common::write_text_file(path, good);
  auto records = ser::datasets::load_iemocap_csv(path);
  REQUIRE(records.size() == 2);
  CHECK(records[0].session == 1);
  CHECK(records[0].method == "impro");
  CHECK(records[0].gender == "F");
  CHECK(records[0].emotion == "ang");
  CHECK(records[0].n_annotators == 3);
  CHECK(records[0].agreement == 2);
  CHECK(records[1].path == "Session5/b2.wav");

  const std::string bad_header = (dir / "bad_header.csv").string();
  ser::common::write_text_file(bad_header,
                               "session,method,gender,emotion,voters,"
                               "agreement,path\n1,impro,F,ang,3,2,a.wav\n");
  CHECK_THROWS_AS(ser::datasets::load_iemocap_csv(bad_header), DataError);

  const std::string bad_session = (dir / "bad_session.csv").string();
  ser::common::write_text_file(
      bad_session,
      "session,method,gender,emotion,n_annotators,agreement,path\n"
      "6,impro,F,ang,3,2,a.wav\n");
  CHECK_THROWS_AS(ser::datasets::load_iemocap_csv(bad_session), DataError);

  const std::string bad_agreement = (dir / "bad_agreement.csv").string();
  ser::common::write_text_file(
      bad_agreement,
      "session,method,gender,emotion,n_annotators,agreement,path\n"
      "1,impro,F,ang,2,3,a.wav\n");
  CHECK_THROWS_AS(ser::datasets::load_iemocap_csv(bad_agreement), DataError);
}

TEST_CASE("transcript tsv and utterance ids") {
  fs::path dir = scratch_dir("tsv");
  const std::string path = (dir / "transcripts.tsv").string();
  ser::common::write_text_file(path,
                               "utt_a\tKids are talking by the door\n"
                               "utt_b\tso, anyway\n");
  auto table = ser::datasets::load_transcripts_tsv(path);
  REQUIRE(table.size() == 2);
  CHECK(table.at("utt_a") == "Kids are talking by the door");
  CHECK(table.at("utt_b") == "so, anyway");

  CHECK(ser::datasets::iemocap_utterance_id("Session1/dia/utt_a.wav") ==
        "utt_a");
  CHECK(ser::datasets::iemocap_utterance_id("plain.wav") == "plain");
}

TEST_CASE("ravdess build keeps task emotions and splits by actor") {
  fs::path dir = scratch_dir("ravdess_corpus");
  // Two actors inside the train range, one in the test range; one file
  // outside the 4-class task and one junk name.
  const char *names[] = {
      "03-01-05-01-01-01-01.wav",  // angry, actor 1
      "03-01-03-01-02-01-02.wav",  // happy, actor 2
      "03-01-04-01-01-02-21.wav",  // sad, actor 21 -> test
      "03-01-06-01-02-01-12.wav",  // fearful -> skipped
  };
  for (const char *n : names) write_tone(dir / n);
  ser::common::write_text_file((dir / "readme.wav").string(), "not audio");

  ser::datasets::BuildReport report;
  auto manifest = ser::datasets::build_ravdess_manifest(
      dir.string(), ser::datasets::BuildOptions{}, &report);
  REQUIRE(manifest.size() == 3);
  CHECK(report.scanned == 5);
  CHECK(report.kept == 3);
  CHECK(report.skipped_label == 1);
  CHECK(report.skipped_unreadable == 1);
  CHECK(!report.warnings.empty());

  for (const auto &u : manifest) {
    CHECK(u.source == "ravdess");
    CHECK(!u.transcript.empty());
  }
  // Rows sort by id (the filename stem), so emotion code order decides.
  CHECK(manifest[0].label == "happy");
  CHECK(manifest[0].split == "train");
  CHECK(manifest[0].transcript == "Dogs are sitting by the door");
  CHECK(manifest[1].label == "sad");
  CHECK(manifest[1].split == "test");
  CHECK(manifest[1].transcript == "Kids are talking by the door");
  CHECK(manifest[2].label == "angry");
  CHECK(manifest[2].split == "train");
  CHECK(manifest[2].transcript == "Kids are talking by the door");
}

TEST_CASE("a lone out-of-task file yields zero rows plus a warning") {
  fs::path dir = scratch_dir("ravdess_fearful");
  write_tone(dir / "03-01-06-01-02-01-12.wav");

  ser::datasets::BuildReport report;
  auto manifest = ser::datasets::build_ravdess_manifest(
      dir.string(), ser::datasets::BuildOptions{}, &report);
  CHECK(manifest.empty());
  CHECK(report.kept == 0);
  CHECK(report.skipped_label == 1);
  CHECK(!report.warnings.empty());

  // With --all-classes semantics the same file is kept under its corpus
  // label.
  ser::datasets::BuildOptions all;
  all.all_classes = true;
  auto full = ser::datasets::build_ravdess_manifest(dir.string(), all,
                                                    nullptr);
  REQUIRE(full.size() == 1);
  CHECK(full[0].label == "fearful");
}

TEST_CASE("an empty directory is an error") {
  fs::path dir = scratch_dir("ravdess_empty");
  CHECK_THROWS_AS(ser::datasets::build_ravdess_manifest(
                      dir.string(), ser::datasets::BuildOptions{}, nullptr),
                  DataError);
  CHECK_THROWS_AS(
      ser::datasets::build_ravdess_manifest(
          (dir / "missing").string(), ser::datasets::BuildOptions{}, nullptr),
      DataError);
}

TEST_CASE("rebuilding the same directory is byte-identical") {
  fs::path dir = scratch_dir("ravdess_deterministic");
  write_tone(dir / "03-01-05-01-01-01-01.wav");
  write_tone(dir / "03-01-04-02-02-02-22.wav");

  auto build_bytes = [&] {
    auto manifest = ser::datasets::build_ravdess_manifest(
        dir.string(), ser::datasets::BuildOptions{}, nullptr);
    const std::string out = (dir / "manifest.csv").string();
    ser::datasets::write_manifest(manifest, out);
    return ser::common::read_text_file(out);
  };
  const std::string first = build_bytes();
  CHECK(build_bytes() == first);
  CHECK(first.find("id,audio_path,transcript,label,split,source") == 0);
}

TEST_CASE("iemocap build merges excited per flag and checks audio") {
  fs::path dir = scratch_dir("iemocap_corpus");
  fs::create_directories(dir / "Session1");
  fs::create_directories(dir / "Session5");
  write_tone(dir / "Session1" / "utt_ang.wav");
  write_tone(dir / "Session1" / "utt_exc.wav");
  write_tone(dir / "Session5" / "utt_sad.wav");

  const std::string meta = (dir / "meta.csv").string();
  ser::common::write_text_file(
      meta,
      "session,method,gender,emotion,n_annotators,agreement,path\n"
      "1,impro,F,ang,3,3,Session1/utt_ang.wav\n"
      "1,script,M,exc,3,2,Session1/utt_exc.wav\n"
      "5,impro,F,sad,3,3,Session5/utt_sad.wav\n"
      "5,impro,M,hap,3,3,Session5/utt_missing.wav\n");
  const std::string tsv = (dir / "transcripts.tsv").string();
  ser::common::write_text_file(tsv, "utt_ang\tWhy would you do that\n");

  ser::datasets::BuildReport report;
  auto merged = ser::datasets::build_iemocap_manifest(
      meta, tsv, dir.string(), ser::datasets::BuildOptions{}, &report);
  REQUIRE(merged.size() == 3);
  CHECK(report.skipped_unreadable == 1);  // utt_missing has no audio
  CHECK(merged[0].id == "utt_ang");
  CHECK(merged[0].transcript == "Why would you do that");
  CHECK(merged[0].split == "train");
  CHECK(merged[1].id == "utt_exc");
  CHECK(merged[1].label == "happy");
  CHECK(merged[2].id == "utt_sad");
  CHECK(merged[2].split == "test");

  // Turning the merge off drops the excited row; counts must move.
  ser::datasets::BuildOptions no_merge;
  no_merge.merge_excited = false;
  auto unmerged = ser::datasets::build_iemocap_manifest(
      meta, tsv, dir.string(), no_merge, nullptr);
  CHECK(unmerged.size() == 2);

  // Rotating the held-out session re-partitions the same rows.
  ser::datasets::BuildOptions rotate;
  rotate.held_out_session = 1;
  auto rotated = ser::datasets::build_iemocap_manifest(
      meta, tsv, dir.string(), rotate, nullptr);
  for (const auto &u : rotated) {
    if (u.id == "utt_sad")
      CHECK(u.split == "train");
    else
      CHECK(u.split == "test");
  }
}

TEST_CASE("manifest csv round-trips including quoted transcripts") {
  fs::path dir = scratch_dir("manifest_io");
  ser::datasets::Manifest manifest;
  manifest.push_back({"a1", "audio/a1.wav", "Kids are talking, by the door.",
                      "angry", "train", "synthetic"});
  manifest.push_back({"b2", "audio/b2.wav", "", "sad", "test", "synthetic"});

  const std::string path = (dir / "manifest.csv").string();
  ser::datasets::write_manifest(manifest, path);
  auto back = ser::datasets::load_manifest(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].id == "a1");
  CHECK(back[0].transcript == "Kids are talking, by the door.");
  CHECK(back[0].split == "train");
  CHECK(back[1].transcript.empty());

  const std::string dup = (dir / "dup.csv").string();
  ser::common::write_text_file(
      dup,
      "id,audio_path,transcript,label,split,source\n"
      "x,a.wav,hi,angry,train,ravdess\n"
      "x,b.wav,yo,sad,test,ravdess\n");
  CHECK_THROWS_AS(ser::datasets::load_manifest(dup), DataError);

  const std::string bad_split = (dir / "bad_split.csv").string();
  ser::common::write_text_file(bad_split,
                               "id,audio_path,transcript,label,split,source\n"
                               "x,a.wav,hi,angry,dev,ravdess\n");
  CHECK_THROWS_AS(ser::datasets::load_manifest(bad_split), DataError);
}
