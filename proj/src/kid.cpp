// SPDX-License-Identifier: Apache-2.0
#include "ganeval/kid.hpp"

#include <algorithm>

#include <fmt/core.h>

#include "ganeval/error.hpp"
#include "ganeval/stats.hpp"

namespace ganeval {

namespace {

constexpr Eigen::Index kGramBlock = 1024;

inline double cube_kernel(double dot, double d) {
  const double v = dot / d + 1.0;
  return v * v * v;
}

// All sums below accumulate k - ref for a shared reference value ref. The
// offset cancels in the estimate, keeps the accumulators small, and makes
// sets whose kernel values are all equal score exactly 0.
double kernel_sum_full(const Matrix& gram, double d, double ref) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < gram.cols(); ++j) {
    for (Eigen::Index i = 0; i < gram.rows(); ++i) s += cube_kernel(gram(i, j), d) - ref;
  }
  return s;
}

double kernel_sum_strict_lower(const Matrix& gram, double d, double ref) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < gram.cols(); ++j) {
    for (Eigen::Index i = j + 1; i < gram.rows(); ++i) s += cube_kernel(gram(i, j), d) - ref;
  }
  return s;
}

// sum_{i != j} (k(x_i, x_j) - ref), as twice the strict lower triangle.
double within_sum(const MatrixView& x, double ref) {
  const Eigen::Index n = x.rows();
  const double d = static_cast<double>(x.cols());
  double total = 0.0;
  Matrix gram;
  for (Eigen::Index bi = 0; bi < n; bi += kGramBlock) {
    const Eigen::Index li = std::min(kGramBlock, n - bi);
    const auto xi = x.middleRows(bi, li);
    for (Eigen::Index bj = 0; bj < bi; bj += kGramBlock) {
      const Eigen::Index lj = std::min(kGramBlock, n - bj);
      gram.noalias() = xi * x.middleRows(bj, lj).transpose();
      total += kernel_sum_full(gram, d, ref);
    }
    gram.setZero(li, li);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(xi);
    total += kernel_sum_strict_lower(gram, d, ref);
  }
  return 2.0 * total;
}

double cross_sum(const MatrixView& x, const MatrixView& y, double ref) {
  const double d = static_cast<double>(x.cols());
  double total = 0.0;
  Matrix gram;
  for (Eigen::Index bi = 0; bi < x.rows(); bi += kGramBlock) {
    const Eigen::Index li = std::min(kGramBlock, x.rows() - bi);
    const auto xi = x.middleRows(bi, li);
    for (Eigen::Index bj = 0; bj < y.rows(); bj += kGramBlock) {
      const Eigen::Index lj = std::min(kGramBlock, y.rows() - bj);
      gram.noalias() = xi * y.middleRows(bj, lj).transpose();
      total += kernel_sum_full(gram, d, ref);
    }
  }
  return total;
}

// Strict weak order on matrices: shape first, then entries column-major.
bool precedes(const MatrixView& a, const MatrixView& b) {
  if (a.rows() != b.rows()) return a.rows() < b.rows();
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (a(i, j) != b(i, j)) return a(i, j) < b(i, j);
    }
  }
  return false;
}

}  // namespace

double poly_kernel(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) {
    throw Error(Errc::dimension_mismatch,
                fmt::format("kernel arguments must share a dimension >= 1, got {} and {}",
                            x.size(), y.size()));
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
  return cube_kernel(dot, static_cast<double>(x.size()));
}

double mmd2_unbiased(const FeatureMatrix& x, const FeatureMatrix& y) {
  return mmd2_unbiased(x.data(), y.data());
}

double mmd2_unbiased(const MatrixView& x, const MatrixView& y) {
  if (x.cols() != y.cols()) {
    throw Error(Errc::dimension_mismatch,
                fmt::format("feature dimensions differ: {} vs {}", x.cols(), y.cols()));
  }
  if (x.rows() < 2 || y.rows() < 2) {
    throw Error(Errc::degenerate_input,
                fmt::format("MMD needs at least 2 rows per set, got {} and {}", x.rows(),
                            y.rows()));
  }
  const double m = static_cast<double>(x.rows());
  const double n = static_cast<double>(y.rows());
  // Fixed argument order for the cross sum keeps the estimate symmetric.
  const bool swap = precedes(y, x);
  const MatrixView& first = swap ? y : x;
  const MatrixView& second = swap ? x : y;
  double dot = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) dot += first(0, j) * second(0, j);
  const double ref = cube_kernel(dot, static_cast<double>(x.cols()));

  const double term_x = within_sum(x, ref) / (m * (m - 1.0));
  const double term_y = within_sum(y, ref) / (n * (n - 1.0));
  const double cross = cross_sum(first, second, ref);
  return (term_x + term_y) - 2.0 * cross / (m * n);
}

KidScore compute_kid(const FeatureMatrix& real, const FeatureMatrix& fake, std::size_t splits) {
  return compute_kid(real.data(), fake.data(), splits);
}

KidScore compute_kid(const MatrixView& real, const MatrixView& fake, std::size_t splits) {
  if (splits == 0) {
    throw Error(Errc::invalid_argument, "number of splits must be at least 1");
  }
  if (real.cols() != fake.cols()) {
    throw Error(Errc::dimension_mismatch,
                fmt::format("feature dimensions differ: {} vs {}", real.cols(), fake.cols()));
  }
  const auto n_real = static_cast<std::size_t>(real.rows());
  const auto n_fake = static_cast<std::size_t>(fake.rows());
  if (n_real < 2 * splits || n_fake < 2 * splits) {
    throw Error(Errc::insufficient_samples,
                fmt::format("{} splits need at least {} rows per set, got {} real and {} fake",
                            splits, 2 * splits, n_real, n_fake));
  }
  const auto real_blocks = split_ranges(n_real, splits);
  const auto fake_blocks = split_ranges(n_fake, splits);

  KidScore out;
  out.splits = splits;
  out.split_values.reserve(splits);
  for (std::size_t i = 0; i < splits; ++i) {
    const auto& r = real_blocks[i];
    const auto& f = fake_blocks[i];
    out.split_values.push_back(
        mmd2_unbiased(real.middleRows(static_cast<Eigen::Index>(r.begin),
                                      static_cast<Eigen::Index>(r.size)),
                      fake.middleRows(static_cast<Eigen::Index>(f.begin),
                                      static_cast<Eigen::Index>(f.size))));
  }
  const MeanStd ms = population_mean_std(out.split_values);
  out.mean = ms.mean;
  out.std = ms.std;
  return out;
}

}  // namespace ganeval
