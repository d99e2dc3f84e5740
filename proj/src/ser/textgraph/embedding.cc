// ser/textgraph/embedding.cc

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

#include "ser/textgraph/embedding.h"

#include <cmath>
#include <sstream>

#include "ser/common/error.h"
#include "ser/common/rng.h"
#include "ser/common/textio.h"

namespace ser::textgraph {

EmbeddingTable EmbeddingTable::load(const std::string &path,
                                    int expected_dim) {
  if (expected_dim < 0)
    throw StructuralError("embeddings: expected_dim must be >= 0");
  const std::string text = common::read_text_file(path);
  EmbeddingTable table(expected_dim);
  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string word;
    fields >> word;
    std::vector<double> vec;
    double v;
    while (fields >> v) vec.push_back(v);
    if (word.empty() || vec.empty() || !fields.eof())
      throw DataError("embeddings: " + path + " line " +
                      std::to_string(line_no) +
                      ": expected `word v1 ... v_dim`");
    for (double x : vec)
      if (!std::isfinite(x))
        throw DataError("embeddings: " + path + " line " +
                        std::to_string(line_no) + ": non-finite value");
    if (table.dim_ == 0) table.dim_ = static_cast<int>(vec.size());
    if (static_cast<int>(vec.size()) != table.dim_)
      throw DataError("embeddings: " + path + " line " +
                      std::to_string(line_no) + ": got " +
                      std::to_string(vec.size()) + " values, expected " +
                      std::to_string(table.dim_));
    if (!table.vectors_.emplace(word, std::move(vec)).second)
      throw DataError("embeddings: " + path + " line " +
                      std::to_string(line_no) + ": duplicate word \"" + word +
                      "\"");
  }
  if (table.dim_ == 0)
    throw DataError("embeddings: " + path + " has no vectors");
  return table;
}

EmbeddingTable EmbeddingTable::with_dim(int dim) {
  if (dim < 1) throw StructuralError("embeddings: dim must be >= 1");
  return EmbeddingTable(dim);
}

bool EmbeddingTable::contains(const std::string &word) const {
  return vectors_.count(word) != 0;
}

std::vector<double> EmbeddingTable::lookup(const std::string &word) const {
  const auto it = vectors_.find(word);
  if (it != vectors_.end()) return it->second;
  // OOV: unit-norm gaussian vector seeded by the word's hash.
  common::Rng rng(common::fnv1a64(word));
  std::vector<double> vec(dim_);
  double norm_sq = 0.0;
  for (double &v : vec) {
    v = rng.gauss();
    norm_sq += v * v;
  }
  if (norm_sq == 0.0) {
    vec[0] = 1.0;
    return vec;
  }
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (double &v : vec) v *= inv;
  return vec;
}

}  // namespace ser::textgraph
