// ser/common/csv.h

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

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ser::common {

// RFC 4180 style quoting: fields containing comma, quote, CR or LF are
// wrapped in double quotes with embedded quotes doubled.
std::string csv_field(std::string_view raw);
std::string csv_join(std::span<const std::string> fields);

// Parses a whole CSV document. Quoted fields may contain commas, doubled
// quotes and newlines. CRLF and LF records both accepted; a trailing
// newline does not produce an empty record. Throws DataError on an
// unterminated quote or stray quote inside an unquoted field.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

// Single-record variant for line-oriented callers; the line must not
// contain embedded newlines.
std::vector<std::string> parse_csv_line(std::string_view line);

}  // namespace ser::common
