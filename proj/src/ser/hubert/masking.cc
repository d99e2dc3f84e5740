// ser/hubert/masking.cc

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

#include "ser/hubert/masking.h"

#include <algorithm>
#include <cmath>

#include "ser/common/error.h"
#include "ser/common/rng.h"

namespace ser::hubert {

std::vector<uint8_t> make_masks(int num_frames, const MaskSpec &spec) {
  if (num_frames < 1)
    throw StructuralError("make_masks: num_frames must be >= 1");
  if (spec.span_len < 1)
    throw StructuralError("make_masks: span_len must be >= 1");
  if (spec.target_coverage < 0.0 || spec.target_coverage > 1.0)
    throw StructuralError("make_masks: target_coverage must be in [0, 1]");

  std::vector<uint8_t> mask(num_frames, 0);
  if (spec.target_coverage == 0.0) return mask;

  std::vector<int> starts;
  for (int s = 0; s < num_frames; s += spec.span_len) starts.push_back(s);
  common::Rng rng(spec.seed);
  rng.shuffle(starts);

  const double target = spec.target_coverage * num_frames;
  int masked = 0;
  for (size_t i = 0; i < starts.size(); ++i) {
    const int start = starts[i];
    const int width = std::min(spec.span_len, num_frames - start);
    if (i > 0 &&
        std::fabs(masked + width - target) >= std::fabs(masked - target))
      break;
    for (int t = start; t < start + width; ++t) mask[t] = 1;
    masked += width;
  }
  return mask;
}

int mask_count(const std::vector<uint8_t> &mask) {
  int count = 0;
  for (uint8_t f : mask) count += f ? 1 : 0;
  return count;
}

}  // namespace ser::hubert
