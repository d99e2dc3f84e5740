// ser/numerics/ops.h

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
#include <span>
#include <vector>

namespace ser::numerics {

/// Numerically stable softmax (max subtraction). Preserves the argmax and
/// sums to 1 within 1e-12.
std::vector<double> softmax(std::span<const double> scores);

/// -log(p[label]) with p clamped at 1e-12 before the log.
double cross_entropy(std::span<const double> probabilities, int label);

struct AdamState {
  int64_t step = 0;
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double learning_rate = 1e-3;

  explicit AdamState(size_t num_params, double lr = 1e-3)
      : first_moment(num_params, 0.0),
        second_moment(num_params, 0.0),
        learning_rate(lr) {}
};

/// One bias-corrected Adam update, in place.
void adam_step(std::span<double> params, std::span<const double> grads,
               AdamState &state);

}  // namespace ser::numerics
