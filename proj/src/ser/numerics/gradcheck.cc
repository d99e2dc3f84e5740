// ser/numerics/gradcheck.cc

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

#include "ser/numerics/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ser/common/error.h"

namespace ser::numerics {

GradCheckReport grad_check(
    const std::function<double(std::span<const double>)> &f,
    std::span<double> params, std::span<const double> analytic,
    double tolerance, double step) {
  if (params.size() != analytic.size())
    throw StructuralError("grad_check: params/analytic size mismatch");
  GradCheckReport report;
  report.passed = true;
  for (size_t i = 0; i < params.size(); ++i) {
    const double saved = params[i];
    params[i] = saved + step;
    const double f_plus = f(params);
    params[i] = saved - step;
    const double f_minus = f(params);
    params[i] = saved;
    const double numeric = (f_plus - f_minus) / (2.0 * step);
    const double a = analytic[i];
    if (!std::isfinite(numeric) || !std::isfinite(a)) {
      std::ostringstream os;
      os << "grad_check: non-finite at entry " << i << " (analytic=" << a
         << ", numeric=" << numeric << ", f+=" << f_plus << ", f-=" << f_minus
         << ")";
      report.passed = false;
      report.worst_index = static_cast<int>(i);
      report.analytic_at_worst = a;
      report.numeric_at_worst = numeric;
      report.max_rel_error = std::numeric_limits<double>::infinity();
      report.message = os.str();
      return report;
    }
    const double denom = std::max({std::fabs(a), std::fabs(numeric), 1.0});
    const double rel = std::fabs(a - numeric) / denom;
    if (rel > report.max_rel_error) {
      report.max_rel_error = rel;
      report.worst_index = static_cast<int>(i);
      report.analytic_at_worst = a;
      report.numeric_at_worst = numeric;
    }
  }
  if (report.max_rel_error > tolerance) {
    std::ostringstream os;
    os << "grad_check: worst entry " << report.worst_index
       << " rel_error=" << report.max_rel_error
       << " (analytic=" << report.analytic_at_worst
       << ", numeric=" << report.numeric_at_worst << ", tol=" << tolerance
       << ")";
    report.passed = false;
    report.message = os.str();
  }
  return report;
}

}  // namespace ser::numerics
