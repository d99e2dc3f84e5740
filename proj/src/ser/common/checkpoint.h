// ser/common/checkpoint.h

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

#include <string>
#include <vector>

#include "ser/common/run_config.h"
#include "ser/numerics/matrix.h"

namespace ser::common {

// On-disk model state: a directory holding meta.txt (model kind, format
// version, arbitrary key=value metadata, and the tensor table) plus
// params.bin (the tensors' doubles, little-endian, in declared order).
struct TensorEntry {
  std::string name;
  bool trainable = true;
  numerics::Matrix value;
};

class Checkpoint {
 public:
  static constexpr int kFormatVersion = 1;

  std::string model_kind;
  RunConfig meta;

  void add(const std::string &name, numerics::Matrix value,
           bool trainable = true);
  bool has_tensor(const std::string &name) const;
  const numerics::Matrix &tensor(const std::string &name) const;
  numerics::Matrix &tensor(const std::string &name);
  bool trainable(const std::string &name) const;
  const std::vector<TensorEntry> &entries() const { return entries_; }
  long long total_values() const;

 private:
  std::vector<TensorEntry> entries_;
  int find(const std::string &name) const;  // -1 when absent
};

void save_checkpoint(const Checkpoint &ckpt, const std::string &dir);
Checkpoint load_checkpoint(const std::string &dir);

}  // namespace ser::common
