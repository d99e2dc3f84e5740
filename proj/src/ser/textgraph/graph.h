// ser/textgraph/graph.h

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
#include <vector>

#include "ser/numerics/eig.h"
#include "ser/numerics/matrix.h"
#include "ser/textgraph/embedding.h"

namespace ser::textgraph {

// A sentence as the GCN sees it: node features, the weighted chain
// adjacency with unit self-loops, its normalized Laplacian and the graph
// Fourier basis (eigendecomposition of L).
struct TextGraph {
  int n = 0;
  numerics::Matrix x;  // n x dim node features
  numerics::Matrix a;  // n x n adjacency, diag = 1
  numerics::Matrix l;  // I - D^{-1/2} A D^{-1/2}
  numerics::EigenDecomposition basis;
};

// Stacks token vectors into an n x dim feature matrix. Empty token list
// raises DataError("empty sentence").
numerics::Matrix embed(const std::vector<std::string> &tokens,
                       const EmbeddingTable &table);

// Chain graph over the rows of x: consecutive nodes share an edge of
// weight (1 + cos(x_i, x_{i+1})) / 2, which maps cosine onto [0, 1] while
// preserving order. A zero-norm row makes the cosine 0 and the weight 0.5.
TextGraph build_chain_graph(const numerics::Matrix &x);

// Convenience: tokenize + embed + build.
TextGraph sentence_graph(const std::string &text, const EmbeddingTable &table);

}  // namespace ser::textgraph
