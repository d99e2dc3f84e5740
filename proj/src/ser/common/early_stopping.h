// ser/common/early_stopping.h

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

#include "ser/common/error.h"

namespace ser::common {

// Patience counter over a metric where larger is better. The first
// observation always counts as an improvement; afterwards only strict
// improvement over the best resets the counter. should_stop() turns true
// once `patience` consecutive non-improving observations have been seen.
class EarlyStopping {
 public:
  explicit EarlyStopping(int patience) : patience_(patience) {
    if (patience < 1) throw StructuralError("EarlyStopping: patience < 1");
  }

  // Returns true when metric improves on the best seen so far.
  bool observe(double metric) {
    if (!has_best_ || metric > best_) {
      has_best_ = true;
      best_ = metric;
      counter_ = 0;
      return true;
    }
    ++counter_;
    return false;
  }

  bool should_stop() const { return counter_ >= patience_; }
  int counter() const { return counter_; }
  int patience() const { return patience_; }
  double best() const { return best_; }
  bool has_best() const { return has_best_; }

 private:
  int patience_;
  int counter_ = 0;
  double best_ = 0.0;
  bool has_best_ = false;
};

}  // namespace ser::common
