// ser/common/checkpoint.cc

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

#include "ser/common/checkpoint.h"

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ser/common/error.h"

namespace ser::common {

namespace fs = std::filesystem;

void Checkpoint::add(const std::string &name, numerics::Matrix value,
                     bool trainable) {
  if (name.empty() || name.find_first_of(" \n") != std::string::npos)
    throw StructuralError("checkpoint: bad tensor name \"" + name + "\"");
  if (find(name) >= 0)
    throw StructuralError("checkpoint: duplicate tensor \"" + name + "\"");
  entries_.push_back(TensorEntry{name, trainable, std::move(value)});
}

int Checkpoint::find(const std::string &name) const {
  for (size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].name == name) return static_cast<int>(i);
  return -1;
}

bool Checkpoint::has_tensor(const std::string &name) const {
  return find(name) >= 0;
}

const numerics::Matrix &Checkpoint::tensor(const std::string &name) const {
  const int i = find(name);
  if (i < 0) throw DataError("checkpoint: no tensor \"" + name + "\"");
  return entries_[i].value;
}

numerics::Matrix &Checkpoint::tensor(const std::string &name) {
  const int i = find(name);
  if (i < 0) throw DataError("checkpoint: no tensor \"" + name + "\"");
  return entries_[i].value;
}

bool Checkpoint::trainable(const std::string &name) const {
  const int i = find(name);
  if (i < 0) throw DataError("checkpoint: no tensor \"" + name + "\"");
  return entries_[i].trainable;
}

long long Checkpoint::total_values() const {
  long long total = 0;
  for (const TensorEntry &e : entries_) total += e.value.size();
  return total;
}

namespace {

void append_le64(std::string &out, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  for (int b = 0; b < 8; ++b)
    out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
}

double read_le64(const unsigned char *p) {
  uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) bits |= static_cast<uint64_t>(p[b]) << (8 * b);
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

}  // namespace

void save_checkpoint(const Checkpoint &ckpt, const std::string &dir) {
  if (ckpt.model_kind.empty())
    throw StructuralError("checkpoint: model_kind not set");
  fs::create_directories(dir);

  std::ostringstream meta;
  meta << "format_version=" << Checkpoint::kFormatVersion << "\n";
  meta << "model_kind=" << ckpt.model_kind << "\n";
  for (const auto &[key, value] : ckpt.meta.values())
    meta << key << "=" << value << "\n";
  for (const TensorEntry &e : ckpt.entries())
    meta << "tensor " << e.name << " " << e.value.rows() << " "
         << e.value.cols() << " " << (e.trainable ? 1 : 0) << "\n";

  const fs::path meta_path = fs::path(dir) / "meta.txt";
  std::ofstream meta_out(meta_path, std::ios::binary);
  if (!meta_out) throw DataError("checkpoint: cannot write " + meta_path.string());
  meta_out << meta.str();
  meta_out.close();
  if (!meta_out) throw DataError("checkpoint: write failed for " + meta_path.string());

  std::string blob;
  blob.reserve(static_cast<size_t>(ckpt.total_values()) * 8);
  for (const TensorEntry &e : ckpt.entries())
    for (long i = 0; i < e.value.size(); ++i)
      append_le64(blob, e.value.data()[i]);
  const fs::path blob_path = fs::path(dir) / "params.bin";
  std::ofstream blob_out(blob_path, std::ios::binary);
  if (!blob_out) throw DataError("checkpoint: cannot write " + blob_path.string());
  blob_out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  blob_out.close();
  if (!blob_out) throw DataError("checkpoint: write failed for " + blob_path.string());
}

Checkpoint load_checkpoint(const std::string &dir) {
  const fs::path meta_path = fs::path(dir) / "meta.txt";
  std::ifstream meta_in(meta_path, std::ios::binary);
  if (!meta_in)
    throw DataError("checkpoint: cannot read " + meta_path.string());

  Checkpoint ckpt;
  struct PendingTensor {
    std::string name;
    int rows, cols;
    bool trainable;
  };
  std::vector<PendingTensor> pending;
  std::string line;
  int line_no = 0;
  bool saw_version = false;
  while (std::getline(meta_in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("tensor ", 0) == 0) {
      std::istringstream fields(line.substr(7));
      PendingTensor t;
      int trainable_flag = 1;
      if (!(fields >> t.name >> t.rows >> t.cols >> trainable_flag) ||
          t.rows < 0 || t.cols < 0)
        throw DataError("checkpoint: bad tensor line " +
                        std::to_string(line_no) + " in " + meta_path.string());
      t.trainable = trainable_flag != 0;
      pending.push_back(t);
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos || eq == 0)
      throw DataError("checkpoint: bad meta line " + std::to_string(line_no) +
                      " in " + meta_path.string());
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "format_version") {
      if (value != std::to_string(Checkpoint::kFormatVersion))
        throw DataError("checkpoint: unsupported format_version " + value);
      saw_version = true;
    } else if (key == "model_kind") {
      ckpt.model_kind = value;
    } else {
      ckpt.meta.set(key, value);
    }
  }
  if (!saw_version)
    throw DataError("checkpoint: missing format_version in " +
                    meta_path.string());
  if (ckpt.model_kind.empty())
    throw DataError("checkpoint: missing model_kind in " + meta_path.string());

  const fs::path blob_path = fs::path(dir) / "params.bin";
  std::ifstream blob_in(blob_path, std::ios::binary);
  if (!blob_in)
    throw DataError("checkpoint: cannot read " + blob_path.string());
  std::string blob((std::istreambuf_iterator<char>(blob_in)),
                   std::istreambuf_iterator<char>());

  size_t expected = 0;
  for (const PendingTensor &t : pending)
    expected += static_cast<size_t>(t.rows) * t.cols * 8;
  if (blob.size() != expected)
    throw DataError("checkpoint: params.bin holds " +
                    std::to_string(blob.size()) + " bytes, expected " +
                    std::to_string(expected));

  const unsigned char *p = reinterpret_cast<const unsigned char *>(blob.data());
  for (const PendingTensor &t : pending) {
    numerics::Matrix m(t.rows, t.cols);
    for (long i = 0; i < m.size(); ++i, p += 8) m.data()[i] = read_le64(p);
    if (!numerics::all_finite(m))
      throw NumericError("checkpoint: tensor \"" + t.name +
                         "\" contains non-finite values");
    ckpt.add(t.name, std::move(m), t.trainable);
  }
  return ckpt;
}

}  // namespace ser::common
