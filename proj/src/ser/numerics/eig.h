// ser/numerics/eig.h

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

#include <vector>

#include "ser/numerics/matrix.h"

namespace ser::numerics {

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  Matrix eigenvectors;              // orthonormal columns, same order
};

/// Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Input must be square, symmetric to 1e-12 and at most 512x512.
/// Eigenvalues come back ascending with matching eigenvector columns.
EigenDecomposition sym_eig(const Matrix &m);

/// U * diag(eigenvalues) * U^T, for reconstruction checks.
Matrix eig_reconstruct(const EigenDecomposition &e);

}  // namespace ser::numerics
