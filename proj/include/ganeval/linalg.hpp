// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ganeval/matrix.hpp"

namespace ganeval {

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // columns; empty when not requested
  bool ok = true;  // false when the solver reports non-convergence
};

/// Eigendecomposition of a symmetric matrix (lower triangle is read).
SymmetricEigen symmetric_eigen(const Matrix& sym, bool want_vectors);

/// n * machine epsilon * max|lambda|. Eigenvalues at or below this are
/// indistinguishable from zero for a backward-stable solver.
double eigen_noise_floor(const Vector& eigenvalues);

/// V diag(sqrt(lambda)) V^T, with eigenvalues at or below the noise floor
/// treated as zero.
Matrix psd_sqrt(const SymmetricEigen& eig);

/// max|lambda| / min|lambda|; +inf for a singular matrix.
double condition_number(const Vector& eigenvalues);

}  // namespace ganeval
