// ser/common/run_config.h

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
#include <set>
#include <string>

namespace ser::common {

// Flat key=value run configuration. Every command resolves its settings
// into one of these and writes it beside its outputs, so a run can be
// replayed from the artifact directory alone.
class RunConfig {
 public:
  void set(const std::string &key, const std::string &value);
  void set_int(const std::string &key, long long value);
  void set_double(const std::string &key, double value);
  void set_bool(const std::string &key, bool value);

  bool has(const std::string &key) const;
  // Getters throw DataError when the key is missing or unparseable.
  const std::string &get(const std::string &key) const;
  long long get_int(const std::string &key) const;
  double get_double(const std::string &key) const;
  bool get_bool(const std::string &key) const;

  const std::map<std::string, std::string> &values() const { return values_; }
  bool operator==(const RunConfig &o) const { return values_ == o.values_; }

  // One `key=value` line per entry, keys sorted. parse rejects keys
  // outside allowed_keys (empty set = accept anything), duplicate keys and
  // malformed lines. parse(print(c), ...) == c.
  std::string print() const;
  static RunConfig parse(const std::string &text,
                         const std::set<std::string> &allowed_keys = {});

  void save(const std::string &path) const;
  static RunConfig load(const std::string &path,
                        const std::set<std::string> &allowed_keys = {});

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace ser::common
