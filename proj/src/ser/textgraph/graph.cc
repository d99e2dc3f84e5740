// ser/textgraph/graph.cc

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

#include "ser/textgraph/graph.h"

#include <cmath>

#include "ser/common/error.h"
#include "ser/textgraph/tokenizer.h"

namespace ser::textgraph {

numerics::Matrix embed(const std::vector<std::string> &tokens,
                       const EmbeddingTable &table) {
  if (tokens.empty()) throw DataError("embed: empty sentence");
  numerics::Matrix x(static_cast<int>(tokens.size()), table.dim());
  for (size_t i = 0; i < tokens.size(); ++i) {
    const std::vector<double> v = table.lookup(tokens[i]);
    for (int j = 0; j < table.dim(); ++j)
      x(static_cast<int>(i), j) = v[j];
  }
  return x;
}

TextGraph build_chain_graph(const numerics::Matrix &x) {
  const int n = x.rows();
  if (n < 1) throw StructuralError("build_chain_graph: need at least 1 node");
  TextGraph g;
  g.n = n;
  g.x = x;
  g.a = numerics::Matrix::identity(n);
  for (int i = 0; i + 1 < n; ++i) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (int j = 0; j < x.cols(); ++j) {
      dot += x(i, j) * x(i + 1, j);
      na += x(i, j) * x(i, j);
      nb += x(i + 1, j) * x(i + 1, j);
    }
    double cosine =
        (na > 0.0 && nb > 0.0) ? dot / (std::sqrt(na) * std::sqrt(nb)) : 0.0;
    // Rounding can push |cos| past 1 for (anti)parallel vectors; clamp so
    // weights stay in [0, 1] with the endpoints hit exactly.
    if (cosine > 1.0) cosine = 1.0;
    if (cosine < -1.0) cosine = -1.0;
    const double w = (1.0 + cosine) / 2.0;
    g.a(i, i + 1) = w;
    g.a(i + 1, i) = w;
  }
  std::vector<double> inv_sqrt_deg(n);
  for (int i = 0; i < n; ++i) {
    double d = 0.0;
    for (int j = 0; j < n; ++j) d += g.a(i, j);
    inv_sqrt_deg[i] = 1.0 / std::sqrt(d);  // d >= 1 thanks to the self-loop
  }
  g.l = numerics::Matrix(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double norm_a = inv_sqrt_deg[i] * g.a(i, j) * inv_sqrt_deg[j];
      const double v = (i == j ? 1.0 : 0.0) - norm_a;
      g.l(i, j) = v;
      g.l(j, i) = v;  // assign both halves so L is bitwise symmetric
    }
  }
  g.basis = numerics::sym_eig(g.l);
  return g;
}

TextGraph sentence_graph(const std::string &text,
                         const EmbeddingTable &table) {
  return build_chain_graph(embed(tokenize(text), table));
}

}  // namespace ser::textgraph
