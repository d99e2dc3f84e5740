// ser/numerics/kmeans.cc

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

#include "ser/numerics/kmeans.h"

#include <cmath>
#include <limits>

#include "ser/common/error.h"
#include "ser/common/rng.h"

namespace ser::numerics {

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

int nearest(const Matrix &centroids, std::span<const double> p, double *dist) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int c = 0; c < centroids.rows(); ++c) {
    const double d = sq_dist(p, centroids.row(c));
    if (d < best_d) {  // strict: ties keep the lowest index
      best_d = d;
      best = c;
    }
  }
  if (dist) *dist = best_d;
  return best;
}

Matrix plus_plus_seed(const Matrix &points, int k, common::Rng &rng) {
  const int n = points.rows(), dim = points.cols();
  Matrix centroids(k, dim);
  std::vector<double> min_d(n, std::numeric_limits<double>::infinity());

  int first = rng.uniform_int(n);
  for (int j = 0; j < dim; ++j) centroids(0, j) = points(first, j);

  for (int c = 1; c < k; ++c) {
    for (int i = 0; i < n; ++i) {
      const double d = sq_dist(points.row(i), centroids.row(c - 1));
      if (d < min_d[i]) min_d[i] = d;
    }
    const int pick = rng.pick_weighted(min_d);
    for (int j = 0; j < dim; ++j) centroids(c, j) = points(pick, j);
  }
  return centroids;
}

}  // namespace

KMeansModel kmeans_fit(const Matrix &points, int k, uint64_t seed,
                       int max_iter) {
  const int n = points.rows(), dim = points.cols();
  if (k < 1) throw StructuralError("kmeans_fit: k must be >= 1");
  if (n < k) throw StructuralError("kmeans_fit: fewer points than clusters");
  if (!all_finite(points)) throw NumericError("kmeans_fit: non-finite points");

  common::Rng rng(seed);
  KMeansModel model;
  model.k = k;
  model.centroids = plus_plus_seed(points, k, rng);

  std::vector<int> assign(n, -1);
  std::vector<double> dist(n, 0.0);

  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    double inertia = 0.0;
    for (int i = 0; i < n; ++i) {
      const int a = nearest(model.centroids, points.row(i), &dist[i]);
      if (a != assign[i]) changed = true;
      assign[i] = a;
      inertia += dist[i];
    }
    model.inertia = inertia;
    model.inertia_history.push_back(inertia);
    if (!changed && iter > 0) break;

    Matrix sums(k, dim);
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      counts[assign[i]]++;
      for (int j = 0; j < dim; ++j) sums(assign[i], j) += points(i, j);
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // Re-seed an emptied centroid to the globally farthest point.
        int far = 0;
        double far_d = -1.0;
        for (int i = 0; i < n; ++i) {
          if (dist[i] > far_d) {
            far_d = dist[i];
            far = i;
          }
        }
        for (int j = 0; j < dim; ++j) model.centroids(c, j) = points(far, j);
        dist[far] = 0.0;  // so two empty clusters pick different points
      } else {
        for (int j = 0; j < dim; ++j)
          model.centroids(c, j) = sums(c, j) / counts[c];
      }
    }
  }

  // Final inertia against the final centroids.
  double inertia = 0.0;
  for (int i = 0; i < n; ++i) {
    double d;
    nearest(model.centroids, points.row(i), &d);
    inertia += d;
  }
  model.inertia = inertia;
  if (model.inertia_history.empty() ||
      inertia < model.inertia_history.back()) {
    model.inertia_history.push_back(inertia);
  }
  return model;
}

std::vector<int> kmeans_assign(const KMeansModel &model, const Matrix &points) {
  if (points.cols() != model.centroids.cols())
    throw StructuralError("kmeans_assign: point dimension " +
                          std::to_string(points.cols()) +
                          " does not match centroid dimension " +
                          std::to_string(model.centroids.cols()));
  std::vector<int> ids(points.rows());
  for (int i = 0; i < points.rows(); ++i)
    ids[i] = nearest(model.centroids, points.row(i), nullptr);
  return ids;
}

}  // namespace ser::numerics
