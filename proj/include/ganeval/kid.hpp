// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ganeval/matrix.hpp"

namespace ganeval {

/// Polynomial kernel of degree 3 with gamma = 1/d and coefficient 1:
/// k(x, y) = (<x, y>/d + 1)^3.
double poly_kernel(std::span<const double> x, std::span<const double> y);

/// Unbiased estimate of squared MMD under poly_kernel:
///
///   1/(m(m-1)) sum_{i!=j} k(x_i,x_j) + 1/(n(n-1)) sum_{i!=j} k(y_i,y_j)
///     - 2/(mn) sum_{i,j} k(x_i,y_j)
///
/// Kernel sums are taken over row blocks of the Gram matrices in a fixed
/// order; the within-set sums visit only the strict lower triangle. The
/// estimate may be negative. Symmetric in its arguments bit for bit.
double mmd2_unbiased(const MatrixView& x, const MatrixView& y);
double mmd2_unbiased(const FeatureMatrix& x, const FeatureMatrix& y);

struct KidScore {
  std::vector<double> split_values;
  double mean = 0.0;
  double std = 0.0;  // population (divides by splits)
  std::size_t splits = 0;
};

/// Splits both sets into `splits` contiguous blocks and pairs block i of
/// real with block i of fake. Each block needs at least 2 rows.
KidScore compute_kid(const FeatureMatrix& real, const FeatureMatrix& fake, std::size_t splits);
KidScore compute_kid(const MatrixView& real, const MatrixView& fake, std::size_t splits);

}  // namespace ganeval
