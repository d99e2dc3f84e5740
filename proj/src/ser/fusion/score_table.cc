// ser/fusion/score_table.cc

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

#include "ser/fusion/score_table.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <span>
#include <stdexcept>

#include "ser/common/csv.h"
#include "ser/common/error.h"
#include "ser/common/textio.h"
#include "ser/numerics/ops.h"

namespace ser::fusion {

namespace {

const char *kHeader[6] = {"id",      "label",     "p_angry",
                          "p_happy", "p_neutral", "p_sad"};

void check_unique_ids(const ScoreTable &table, const std::string &context) {
  std::set<std::string> ids;
  for (const ScoreRow &row : table.rows)
    if (!ids.insert(row.id).second)
      throw DataError(context + ": duplicate id \"" + row.id + "\"");
}

}  // namespace

const char *score_kind_name(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::kRaw: return "raw";
    case ScoreKind::kProbability: return "probability";
    case ScoreKind::kFused: return "fused";
  }
  throw StructuralError("score table: bad kind");
}

ScoreKind score_kind_from_name(const std::string &name) {
  if (name == "raw") return ScoreKind::kRaw;
  if (name == "probability") return ScoreKind::kProbability;
  if (name == "fused") return ScoreKind::kFused;
  throw DataError("score table: unknown kind \"" + name + "\"");
}

void write_score_table(const ScoreTable &table, const std::string &path) {
  check_unique_ids(table, "score table");
  std::string out = "# kind=";
  out += score_kind_name(table.kind);
  out.push_back('\n');
  {
    std::vector<std::string> header(kHeader, kHeader + 6);
    out += common::csv_join(header);
    out.push_back('\n');
  }
  char buf[32];
  for (const ScoreRow &row : table.rows) {
    std::vector<std::string> fields = {row.id, row.label};
    for (double s : row.scores) {
      std::snprintf(buf, sizeof(buf), "%.6f", s);
      fields.emplace_back(buf);
    }
    out += common::csv_join(fields);
    out.push_back('\n');
  }
  common::write_text_file(path, out);
}

ScoreTable load_score_table(const std::string &path) {
  const std::string text = common::read_text_file(path);
  const size_t first_nl = text.find('\n');
  if (first_nl == std::string::npos || text.rfind("# kind=", 0) != 0)
    throw DataError("score table: " + path +
                    ": missing `# kind=...` first line");
  ScoreTable table;
  table.kind = score_kind_from_name(text.substr(7, first_nl - 7));

  const auto rows = common::parse_csv(text.substr(first_nl + 1));
  if (rows.empty())
    throw DataError("score table: " + path + ": missing header");
  if (rows[0].size() != 6)
    throw DataError("score table: " + path + ": expected 6 header columns");
  for (int i = 0; i < 6; ++i)
    if (rows[0][i] != kHeader[i])
      throw DataError("score table: " + path + ": header column " +
                      std::to_string(i + 1) + " is \"" + rows[0][i] +
                      "\", expected \"" + kHeader[i] + "\"");
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto &fields = rows[r];
    if (fields.size() != 6)
      throw DataError("score table: " + path + " row " + std::to_string(r) +
                      ": expected 6 fields");
    ScoreRow row;
    row.id = fields[0];
    row.label = fields[1];
    if (row.id.empty())
      throw DataError("score table: " + path + " row " + std::to_string(r) +
                      ": empty id");
    double sum = 0.0;
    for (int c = 0; c < datasets::kNumEmotions; ++c) {
      try {
        size_t used = 0;
        row.scores[c] = std::stod(fields[2 + c], &used);
        if (used != fields[2 + c].size())
          throw std::invalid_argument(fields[2 + c]);
      } catch (const std::exception &) {
        throw DataError("score table: " + path + " row " + std::to_string(r) +
                        ": bad score \"" + fields[2 + c] + "\"");
      }
      if (!std::isfinite(row.scores[c]))
        throw DataError("score table: " + path + " row " + std::to_string(r) +
                        " (id " + row.id + "): non-finite score");
      sum += row.scores[c];
    }
    // 1e-6 on the in-memory rows, plus up to 5e-7 per score lost to the
    // 6-decimal storage format.
    if (table.kind == ScoreKind::kProbability && std::fabs(sum - 1.0) > 3e-6)
      throw DataError("score table: " + path + " row " + std::to_string(r) +
                      " (id " + row.id + "): probabilities sum to " +
                      std::to_string(sum));
    table.rows.push_back(std::move(row));
  }
  check_unique_ids(table, "score table: " + path);
  return table;
}

ScoreTable to_probabilities(const ScoreTable &table) {
  if (table.kind != ScoreKind::kRaw)
    throw DataError(std::string("to_probabilities: expected a raw table, got ") +
                    score_kind_name(table.kind));
  ScoreTable out;
  out.kind = ScoreKind::kProbability;
  out.rows.reserve(table.rows.size());
  for (const ScoreRow &row : table.rows) {
    for (double s : row.scores)
      if (!std::isfinite(s))
        throw DataError("to_probabilities: non-finite score in row id \"" +
                        row.id + "\"");
    ScoreRow p = row;
    const std::vector<double> probs = numerics::softmax(
        std::span<const double>(row.scores.data(), row.scores.size()));
    std::copy(probs.begin(), probs.end(), p.scores.begin());
    out.rows.push_back(std::move(p));
  }
  return out;
}

ScoreTable fuse_max(const ScoreTable &a, const ScoreTable &b) {
  if (a.kind != ScoreKind::kProbability || b.kind != ScoreKind::kProbability)
    throw DataError("fuse_max: both tables must be probability kind");
  check_unique_ids(a, "fuse_max: first table");
  check_unique_ids(b, "fuse_max: second table");
  std::map<std::string, const ScoreRow *> b_rows;
  for (const ScoreRow &row : b.rows) b_rows[row.id] = &row;
  std::vector<std::string> only_a, only_b;
  for (const ScoreRow &row : a.rows)
    if (!b_rows.count(row.id)) only_a.push_back(row.id);
  {
    std::set<std::string> a_ids;
    for (const ScoreRow &row : a.rows) a_ids.insert(row.id);
    for (const ScoreRow &row : b.rows)
      if (!a_ids.count(row.id)) only_b.push_back(row.id);
  }
  if (!only_a.empty() || !only_b.empty()) {
    std::string msg = "fuse_max: id mismatch;";
    if (!only_a.empty()) {
      msg += " only in first:";
      for (const std::string &id : only_a) msg += " " + id;
      msg += ";";
    }
    if (!only_b.empty()) {
      msg += " only in second:";
      for (const std::string &id : only_b) msg += " " + id;
    }
    throw DataError(msg);
  }

  ScoreTable out;
  out.kind = ScoreKind::kFused;
  out.rows.reserve(a.rows.size());
  for (const ScoreRow &row : a.rows) {
    const ScoreRow &other = *b_rows.at(row.id);
    if (row.label != other.label)
      throw DataError("fuse_max: id \"" + row.id +
                      "\" has conflicting labels \"" + row.label + "\" / \"" +
                      other.label + "\"");
    ScoreRow fused = row;
    for (int c = 0; c < datasets::kNumEmotions; ++c)
      fused.scores[c] = std::max(row.scores[c], other.scores[c]);
    out.rows.push_back(std::move(fused));
  }
  return out;
}

int decide_row(const ScoreRow &row) {
  int best = 0;
  for (int c = 1; c < datasets::kNumEmotions; ++c)
    if (row.scores[c] > row.scores[best]) best = c;
  return best;
}

std::vector<int> decide(const ScoreTable &table) {
  if (table.kind == ScoreKind::kRaw)
    throw DataError("decide: table must be probability or fused kind");
  std::vector<int> out;
  out.reserve(table.rows.size());
  for (const ScoreRow &row : table.rows) out.push_back(decide_row(row));
  return out;
}

}  // namespace ser::fusion
