// ser/hubert/masking.h

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

namespace ser::hubert {

struct MaskSpec {
  int span_len = 10;
  double target_coverage = 0.5;
  uint64_t seed = 0;
};

// Span mask over num_frames frames. Candidate spans start at multiples of
// span_len (the final one clipped at the sequence end); they are drawn in
// seeded shuffled order, always taking the first, then taking each next
// span only while it moves coverage strictly closer to the target. The
// closest-to-target stop keeps the masked fraction within +/-0.1 of the
// target for sequences of at least 4 spans, which a plain
// "draw until >= target" rule does not. Sequences shorter than one span
// get fully masked (the single clipped span covers everything).
std::vector<uint8_t> make_masks(int num_frames, const MaskSpec &spec);

// Masked-frame count of a mask vector.
int mask_count(const std::vector<uint8_t> &mask);

}  // namespace ser::hubert
