// ser/common/error.h

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

#include <stdexcept>
#include <string>

namespace ser {

/// Shape, kind or contract violations (bad dimensions, wrong table kind...).
class StructuralError : public std::runtime_error {
 public:
  explicit StructuralError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Problems with input data: unreadable files, malformed rows, bad codes.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Numerical failures: non-finite values, non-convergence.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string &msg) : std::runtime_error(msg) {}
};

}  // namespace ser
