// ser/hubert/units.cc

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

#include "ser/hubert/units.h"

#include <cmath>
#include <cstring>
#include <string>

#include "ser/common/error.h"
#include "ser/common/rng.h"
#include "ser/numerics/kmeans.h"

namespace ser::hubert {

UnitDiscovery discover_units(const std::vector<dsp::FeatureMatrix> &features,
                             int k, int proj_dim, uint64_t seed) {
  if (k < 1) throw StructuralError("discover_units: k must be >= 1");
  if (proj_dim < 1)
    throw StructuralError("discover_units: proj_dim must be >= 1");
  if (features.empty())
    throw DataError("discover_units: no utterances given");

  const int dim = features.front().dim();
  int total = 0;
  for (const auto &f : features) {
    if (f.dim() != dim)
      throw DataError("discover_units: inconsistent feature dims " +
                      std::to_string(f.dim()) + " vs " + std::to_string(dim));
    total += f.frames();
  }
  if (total < k)
    throw DataError("discover_units: " + std::to_string(total) +
                    " frames total but k=" + std::to_string(k) +
                    "; need at least k frames");

  numerics::Matrix pooled(total, dim);
  int row = 0;
  for (const auto &f : features) {
    std::memcpy(pooled.row(row).data(), f.values.data(),
                sizeof(double) * f.values.size());
    row += f.frames();
  }

  UnitDiscovery out;
  numerics::KMeansModel km = numerics::kmeans_fit(pooled, k, seed);
  out.codebook.k = k;
  out.codebook.centroids = km.centroids;

  const double bound = 1.0 / std::sqrt(static_cast<double>(proj_dim));
  common::Rng rng(seed ^ 0x7f4a7c15ull);
  out.codebook.unit_embeddings = numerics::Matrix(k, proj_dim);
  double *emb = out.codebook.unit_embeddings.data();
  for (long i = 0; i < out.codebook.unit_embeddings.size(); ++i)
    emb[i] = rng.uniform(-bound, bound);

  out.labels.reserve(features.size());
  for (const auto &f : features)
    out.labels.push_back(numerics::kmeans_assign(km, f.values));
  return out;
}

std::vector<int> assign_units(const UnitCodebook &codebook,
                              const dsp::FeatureMatrix &features) {
  if (features.dim() != codebook.centroids.cols())
    throw DataError("assign_units: feature dim " +
                    std::to_string(features.dim()) + " vs centroid dim " +
                    std::to_string(codebook.centroids.cols()));
  numerics::KMeansModel km;
  km.k = codebook.k;
  km.centroids = codebook.centroids;
  return numerics::kmeans_assign(km, features.values);
}

}  // namespace ser::hubert
