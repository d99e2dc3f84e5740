// ser/common/parallel.h

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

namespace ser::common {

// Worker-thread budget: hardware concurrency, capped by the SER_DUO_THREADS
// environment variable when that parses as a positive integer. Unparseable
// or non-positive values fall back to 1. Always >= 1.
int thread_budget();

// Runs fn(0) .. fn(n-1) across up to thread_budget() threads. Iteration
// order across threads is unspecified, so callers keep determinism by
// writing only to slot i of preallocated output. The first exception thrown
// by any iteration is rethrown on the calling thread after all workers
// join.
void parallel_for(int n, const std::function<void(int)> &fn);

}  // namespace ser::common
