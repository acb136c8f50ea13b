// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

#include "ganeval/matrix.hpp"
#include "ganeval/stats.hpp"

namespace ganeval {

/// Distances in [-kFidClampTolerance, 0) are reported as 0; anything lower
/// is an error.
inline constexpr double kFidClampTolerance = 1e-8;
/// Diagonal jitter added to both covariances when the square root fails.
inline constexpr double kFidEpsilon = 1e-6;

struct FidScore {
  double value = 0.0;
  std::size_t n_real = 0;
  std::size_t n_fake = 0;
  bool epsilon_applied = false;
};

/// Tr((A B)^{1/2}) for symmetric PSD A, B, through the symmetric product
/// S = A^{1/2} B A^{1/2}: both eigendecompositions clamp negative
/// eigenvalues at zero and the result is sum_i sqrt(lambda_i(S)).
/// Throws Errc::numerical_failure (with both condition numbers) if the
/// result is not finite.
double sqrtm_product_trace(const Matrix& cov_a, const Matrix& cov_b);

/// ||mu_a - mu_b||^2 + Tr(A) + Tr(B) - 2 Tr((A B)^{1/2}).
double frechet_distance(const GaussianStats& a, const GaussianStats& b);

/// Fits a Gaussian to each set and returns their Frechet distance. If the
/// square root is not finite, retries once with kFidEpsilon * I added to
/// both covariances.
FidScore compute_fid(const FeatureMatrix& real, const FeatureMatrix& fake);
FidScore compute_fid(const MatrixView& real, const MatrixView& fake);

}  // namespace ganeval
