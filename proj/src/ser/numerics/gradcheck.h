// ser/numerics/gradcheck.h

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

#include <functional>
#include <span>
#include <string>

namespace ser::numerics {

struct GradCheckReport {
  bool passed = false;
  double max_rel_error = 0.0;
  int worst_index = -1;
  double analytic_at_worst = 0.0;
  double numeric_at_worst = 0.0;
  std::string message;  // non-empty on failure, names the offending entry
};

// Central-difference check of an analytic gradient. f is evaluated with
// entries of params perturbed in place (and restored). The relative error
// for entry i is |a - n| / max(|a|, |n|, 1), so tiny gradients are compared
// on an absolute scale.
GradCheckReport grad_check(const std::function<double(std::span<const double>)> &f,
                           std::span<double> params,
                           std::span<const double> analytic, double tolerance,
                           double step = 1e-5);

}  // namespace ser::numerics
