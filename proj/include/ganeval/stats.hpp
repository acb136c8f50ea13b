// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ganeval/matrix.hpp"

namespace ganeval {

/// Mean vector and covariance fitted to a feature set. cov is exactly
/// symmetric with a nonnegative diagonal.
struct GaussianStats {
  Vector mean;
  Matrix cov;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(mean.size()); }
};

/// Builds stats from a mean and a covariance, symmetrizing as (A + A^T)/2.
/// Throws on shape mismatch or a negative diagonal entry.
GaussianStats make_gaussian_stats(Vector mean, const Matrix& cov);

/// Column means and n-1 normalized sample covariance. Sums run over rows in
/// order; the covariance is accumulated from row blocks of the centered data
/// in a fixed block order. Requires at least two rows.
GaussianStats fit_gaussian(const FeatureMatrix& feats);
GaussianStats fit_gaussian(const MatrixView& feats);

/// n_take distinct rows, chosen by a partial Fisher-Yates shuffle driven by
/// SplitMix64(seed). Row order of the result is the shuffle order.
std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t n_take, std::uint64_t seed);
FeatureMatrix subsample(const FeatureMatrix& feats, std::size_t n_take, std::uint64_t seed);
Matrix gather_rows(const MatrixView& m, std::span<const std::size_t> rows);

struct RowRange {
  std::size_t begin = 0;
  std::size_t size = 0;

  friend bool operator==(const RowRange&, const RowRange&) = default;
};

/// k contiguous blocks covering [0, n); the first n mod k blocks hold
/// ceil(n/k) rows, the rest floor(n/k).
std::vector<RowRange> split_ranges(std::size_t n, std::size_t k);
std::vector<FeatureMatrix> split_k(const FeatureMatrix& feats, std::size_t k);

/// Row-wise softmax with max subtraction.
Matrix softmax_rows(const LogitMatrix& logits);
/// Row-wise log-softmax, x - max - log(sum exp(x - max)).
Matrix log_softmax_rows(const MatrixView& logits);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

/// Left-to-right mean. The std divides by n (population) or n-1 (sample);
/// a single value has std 0 under either convention.
MeanStd population_mean_std(std::span<const double> values);
MeanStd sample_mean_std(std::span<const double> values);

}  // namespace ganeval
