// ser/common/csv.cc

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

#include "ser/common/csv.h"

#include "ser/common/error.h"

namespace ser::common {

std::string csv_field(std::string_view raw) {
  const bool needs_quotes =
      raw.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) return std::string(raw);
  std::string out;
  out.reserve(raw.size() + 2);
  out.push_back('"');
  for (char c : raw) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string csv_join(std::span<const std::string> fields) {
  std::string out;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += csv_field(fields[i]);
  }
  return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool record_has_content = false;
  size_t i = 0;
  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
    record_has_content = false;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      ++i;
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted)
          throw DataError("csv: stray quote inside unquoted field");
        in_quotes = true;
        field_was_quoted = true;
        record_has_content = true;
        ++i;
        break;
      case ',':
        end_field();
        record_has_content = true;
        ++i;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_record();
        ++i;
        break;
      case '\n':
        end_record();
        ++i;
        break;
      default:
        field.push_back(c);
        record_has_content = true;
        ++i;
        break;
    }
  }
  if (in_quotes) throw DataError("csv: unterminated quoted field");
  if (record_has_content || !record.empty()) end_record();
  return records;
}

std::vector<std::string> parse_csv_line(std::string_view line) {
  if (line.find('\n') != std::string_view::npos)
    throw DataError("csv: embedded newline in single-record parse");
  std::vector<std::vector<std::string>> rows = parse_csv(line);
  if (rows.empty()) return {std::string()};
  if (rows.size() != 1) throw DataError("csv: expected a single record");
  return rows[0];
}

}  // namespace ser::common
