// ser/textgraph/embedding.h

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
#include <unordered_map>
#include <vector>

namespace ser::textgraph {

// Word-vector table in GloVe text format (one line = word + dim floats).
// Lookup is total: out-of-vocabulary words get a deterministic unit-norm
// vector derived from a hash of the word, identical across runs and
// processes.
class EmbeddingTable {
 public:
  // expected_dim 0 means take the dimension from the first line. Malformed
  // lines, dimension mismatches and duplicate words raise DataError with
  // the line number.
  static EmbeddingTable load(const std::string &path, int expected_dim = 0);
  // Empty table: every lookup takes the OOV path.
  static EmbeddingTable with_dim(int dim);

  int dim() const { return dim_; }
  size_t vocabulary_size() const { return vectors_.size(); }
  bool contains(const std::string &word) const;
  std::vector<double> lookup(const std::string &word) const;

 private:
  explicit EmbeddingTable(int dim) : dim_(dim) {}
  int dim_;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

}  // namespace ser::textgraph
