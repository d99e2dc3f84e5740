// ser/common/run_config.cc

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

#include "ser/common/run_config.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ser/common/error.h"

namespace ser::common {

void RunConfig::set(const std::string &key, const std::string &value) {
  if (key.empty() || key.find('=') != std::string::npos ||
      key.find('\n') != std::string::npos)
    throw StructuralError("RunConfig: bad key \"" + key + "\"");
  if (value.find('\n') != std::string::npos)
    throw StructuralError("RunConfig: value for \"" + key +
                          "\" contains a newline");
  values_[key] = value;
}

void RunConfig::set_int(const std::string &key, long long value) {
  set(key, std::to_string(value));
}

void RunConfig::set_double(const std::string &key, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  set(key, buf);
}

void RunConfig::set_bool(const std::string &key, bool value) {
  set(key, value ? "true" : "false");
}

bool RunConfig::has(const std::string &key) const {
  return values_.count(key) != 0;
}

const std::string &RunConfig::get(const std::string &key) const {
  auto it = values_.find(key);
  if (it == values_.end())
    throw DataError("RunConfig: missing key \"" + key + "\"");
  return it->second;
}

long long RunConfig::get_int(const std::string &key) const {
  const std::string &v = get(key);
  try {
    size_t used = 0;
    const long long out = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception &) {
    throw DataError("RunConfig: key \"" + key + "\" is not an integer: " + v);
  }
}

double RunConfig::get_double(const std::string &key) const {
  const std::string &v = get(key);
  try {
    size_t used = 0;
    const double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception &) {
    throw DataError("RunConfig: key \"" + key + "\" is not a number: " + v);
  }
}

bool RunConfig::get_bool(const std::string &key) const {
  const std::string &v = get(key);
  if (v == "true") return true;
  if (v == "false") return false;
  throw DataError("RunConfig: key \"" + key + "\" is not a bool: " + v);
}

std::string RunConfig::print() const {
  std::string out;
  for (const auto &[key, value] : values_) {
    out += key;
    out.push_back('=');
    out += value;
    out.push_back('\n');
  }
  return out;
}

RunConfig RunConfig::parse(const std::string &text,
                           const std::set<std::string> &allowed_keys) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos || eq == 0)
      throw DataError("RunConfig: line " + std::to_string(line_no) +
                      " is not key=value: " + line);
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (!allowed_keys.empty() && allowed_keys.count(key) == 0)
      throw DataError("RunConfig: unknown key \"" + key + "\"");
    if (cfg.values_.count(key))
      throw DataError("RunConfig: duplicate key \"" + key + "\"");
    cfg.set(key, value);
  }
  return cfg;
}

void RunConfig::save(const std::string &path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("RunConfig: cannot write " + path);
  out << print();
  if (!out) throw DataError("RunConfig: write failed for " + path);
}

RunConfig RunConfig::load(const std::string &path,
                          const std::set<std::string> &allowed_keys) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("RunConfig: cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), allowed_keys);
}

}  // namespace ser::common
