// ser/numerics/ops.cc

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

#include "ser/numerics/ops.h"

#include <algorithm>
#include <cmath>

#include "ser/common/error.h"

namespace ser::numerics {

std::vector<double> softmax(std::span<const double> scores) {
  if (scores.empty()) throw StructuralError("softmax: empty score vector");
  double m = scores[0];
  for (double s : scores) {
    if (!std::isfinite(s)) throw NumericError("softmax: non-finite score");
    m = std::max(m, s);
  }
  std::vector<double> out(scores.size());
  double total = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp(scores[i] - m);
    total += out[i];
  }
  for (double &p : out) p /= total;
  return out;
}

double cross_entropy(std::span<const double> probabilities, int label) {
  if (label < 0 || label >= static_cast<int>(probabilities.size()))
    throw StructuralError("cross_entropy: label out of range");
  const double p = std::max(probabilities[label], 1e-12);
  return -std::log(p);
}

void adam_step(std::span<double> params, std::span<const double> grads,
               AdamState &state) {
  if (params.size() != grads.size() ||
      params.size() != state.first_moment.size())
    throw StructuralError("adam_step: parameter/gradient length mismatch");
  state.step += 1;
  const double b1 = state.beta1, b2 = state.beta2;
  const double bc1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
  for (size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.first_moment[i] = b1 * state.first_moment[i] + (1.0 - b1) * g;
    state.second_moment[i] = b2 * state.second_moment[i] + (1.0 - b2) * g * g;
    const double m_hat = state.first_moment[i] / bc1;
    const double v_hat = state.second_moment[i] / bc2;
    params[i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
  }
}

}  // namespace ser::numerics
