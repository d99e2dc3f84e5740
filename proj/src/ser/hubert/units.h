// ser/hubert/units.h

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

#include "ser/dsp/mfcc.h"
#include "ser/numerics/matrix.h"

namespace ser::hubert {

// Acoustic unit inventory. Rows stay aligned: unit i owns centroid row i
// and embedding row i.
struct UnitCodebook {
  int k = 0;
  numerics::Matrix centroids;        // k x feat_dim
  numerics::Matrix unit_embeddings;  // k x proj_dim, trainable
};

struct UnitDiscovery {
  UnitCodebook codebook;
  // Per-utterance frame labels, same order as the input features.
  std::vector<std::vector<int>> labels;
};

// Pools every frame of every utterance, clusters with k-means, and labels
// each frame with its nearest centroid. Embeddings get a scaled uniform
// init from the same seed. Fewer pooled frames than k is a DataError.
UnitDiscovery discover_units(const std::vector<dsp::FeatureMatrix> &features,
                             int k, int proj_dim, uint64_t seed);

// Nearest-centroid labels for one utterance.
std::vector<int> assign_units(const UnitCodebook &codebook,
                              const dsp::FeatureMatrix &features);

}  // namespace ser::hubert
