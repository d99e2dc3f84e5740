// ser/datasets/iemocap.cc

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

#include "ser/datasets/iemocap.h"

#include <stdexcept>

#include "ser/common/csv.h"
#include "ser/common/error.h"
#include "ser/common/textio.h"

namespace ser::datasets {

namespace {

const char *kHeader[7] = {"session",      "method",    "gender", "emotion",
                          "n_annotators", "agreement", "path"};

int parse_int_field(const std::string &v, const char *field, int row) {
  try {
    size_t used = 0;
    const int out = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception &) {
    throw DataError("iemocap: row " + std::to_string(row) + ": " + field +
                    " is not an integer: \"" + v + "\"");
  }
}

}  // namespace

std::vector<IemocapRecord> load_iemocap_csv(const std::string &path) {
  const auto rows = common::parse_csv(common::read_text_file(path));
  if (rows.empty()) throw DataError("iemocap: " + path + " is empty");
  if (rows[0].size() != 7)
    throw DataError("iemocap: " + path + ": expected 7 header columns, got " +
                    std::to_string(rows[0].size()));
  for (int i = 0; i < 7; ++i)
    if (rows[0][i] != kHeader[i])
      throw DataError("iemocap: " + path + ": header column " +
                      std::to_string(i + 1) + " is \"" + rows[0][i] +
                      "\", expected \"" + kHeader[i] + "\"");

  std::vector<IemocapRecord> records;
  for (size_t r = 1; r < rows.size(); ++r) {
    const int row_no = static_cast<int>(r) + 1;  // 1-based incl. header
    const auto &row = rows[r];
    if (row.size() != 7)
      throw DataError("iemocap: row " + std::to_string(row_no) + ": expected 7 fields, got " +
                      std::to_string(row.size()));
    IemocapRecord rec;
    rec.session = parse_int_field(row[0], "session", row_no);
    rec.method = row[1];
    rec.gender = row[2];
    rec.emotion = row[3];
    rec.n_annotators = parse_int_field(row[4], "n_annotators", row_no);
    rec.agreement = parse_int_field(row[5], "agreement", row_no);
    rec.path = row[6];
    if (rec.session < 1 || rec.session > 5)
      throw DataError("iemocap: row " + std::to_string(row_no) +
                      ": session " + std::to_string(rec.session) +
                      " out of range 1..5");
    if (rec.method != "script" && rec.method != "impro")
      throw DataError("iemocap: row " + std::to_string(row_no) +
                      ": method must be script or impro, got \"" + rec.method +
                      "\"");
    if (rec.gender != "M" && rec.gender != "F")
      throw DataError("iemocap: row " + std::to_string(row_no) +
                      ": gender must be M or F, got \"" + rec.gender + "\"");
    if (rec.agreement < 2 || rec.agreement > 4)
      throw DataError("iemocap: row " + std::to_string(row_no) +
                      ": agreement " + std::to_string(rec.agreement) +
                      " out of range 2..4");
    if (rec.agreement > rec.n_annotators)
      throw DataError("iemocap: row " + std::to_string(row_no) +
                      ": agreement exceeds n_annotators");
    if (rec.path.empty())
      throw DataError("iemocap: row " + std::to_string(row_no) +
                      ": empty path");
    records.push_back(std::move(rec));
  }
  return records;
}

Split split_iemocap(const IemocapRecord &record, int held_out_session) {
  if (held_out_session < 1 || held_out_session > 5)
    throw StructuralError("split_iemocap: held-out session out of range 1..5");
  return record.session == held_out_session ? Split::kTest : Split::kTrain;
}

std::map<std::string, std::string> load_transcripts_tsv(
    const std::string &path) {
  std::map<std::string, std::string> out;
  const std::string text = common::read_text_file(path);
  size_t start = 0;
  int line_no = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      throw DataError("transcripts: " + path + " line " +
                      std::to_string(line_no) + ": expected id<TAB>text");
    const std::string id = line.substr(0, tab);
    if (out.count(id))
      throw DataError("transcripts: duplicate utterance id \"" + id + "\"");
    out[id] = line.substr(tab + 1);
  }
  return out;
}

std::string iemocap_utterance_id(const std::string &path) {
  std::string base = path;
  const size_t slash = base.find_last_of("/\\");
  if (slash != std::string::npos) base = base.substr(slash + 1);
  const size_t dot = base.find_last_of('.');
  if (dot != std::string::npos && dot > 0) base = base.substr(0, dot);
  if (base.empty())
    throw DataError("iemocap: cannot derive utterance id from \"" + path +
                    "\"");
  return base;
}

}  // namespace ser::datasets
