// ser/numerics/kmeans.h

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

#include <cstdint>
#include <vector>

#include "ser/numerics/matrix.h"

namespace ser::numerics {

struct KMeansModel {
  int k = 0;
  Matrix centroids;  // k x dim
  double inertia = 0.0;
  // Inertia after each Lloyd iteration; non-increasing by construction.
  std::vector<double> inertia_history;
};

/// Lloyd's algorithm from k-means++ seeding, deterministic for a given seed.
/// An iteration that empties a cluster re-seeds that centroid to the point
/// currently farthest from its assigned centroid.
KMeansModel kmeans_fit(const Matrix &points, int k, uint64_t seed,
                       int max_iter = 100);

/// Nearest-centroid id per row (squared Euclidean, ties to the lowest index).
std::vector<int> kmeans_assign(const KMeansModel &model, const Matrix &points);

}  // namespace ser::numerics
