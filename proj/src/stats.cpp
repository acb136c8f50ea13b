// SPDX-License-Identifier: Apache-2.0
#include "ganeval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/core.h>

#include "ganeval/error.hpp"
#include "ganeval/rng.hpp"

namespace ganeval {

namespace {

constexpr Eigen::Index kCovBlockRows = 1024;

}  // namespace

GaussianStats make_gaussian_stats(Vector mean, const Matrix& cov) {
  if (cov.rows() != cov.cols() || cov.rows() != mean.size()) {
    throw Error(Errc::dimension_mismatch,
                fmt::format("mean has length {} but covariance is {}x{}", mean.size(), cov.rows(),
                            cov.cols()));
  }
  GaussianStats out;
  out.mean = std::move(mean);
  out.cov = 0.5 * (cov + cov.transpose());
  for (Eigen::Index i = 0; i < out.cov.rows(); ++i) {
    if (!(out.cov(i, i) >= 0.0)) {
      throw Error(Errc::invalid_argument,
                  fmt::format("covariance diagonal entry {} is negative ({})", i, out.cov(i, i)));
    }
  }
  return out;
}

GaussianStats fit_gaussian(const FeatureMatrix& feats) { return fit_gaussian(feats.data()); }

GaussianStats fit_gaussian(const MatrixView& x) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  if (n < 2) {
    throw Error(Errc::degenerate_input,
                fmt::format("need at least 2 rows to fit a covariance, got {}", n));
  }

  Vector mean(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) s += x(i, j);
    mean(j) = s / static_cast<double>(n);
  }

  Matrix cov = Matrix::Zero(d, d);
  Matrix block;
  for (Eigen::Index start = 0; start < n; start += kCovBlockRows) {
    const Eigen::Index len = std::min(kCovBlockRows, n - start);
    block = x.middleRows(start, len).rowwise() - mean.transpose();
    cov.selfadjointView<Eigen::Lower>().rankUpdate(block.transpose());
  }
  cov = cov.selfadjointView<Eigen::Lower>();
  cov /= static_cast<double>(n - 1);

  // Exactly symmetric already (mirrored from the lower triangle).
  GaussianStats out;
  out.mean = std::move(mean);
  out.cov = std::move(cov);
  for (Eigen::Index i = 0; i < d; ++i) out.cov(i, i) = std::max(out.cov(i, i), 0.0);
  return out;
}

std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t n_take, std::uint64_t seed) {
  if (n_take < 1) {
    throw Error(Errc::invalid_argument, "subsample size must be at least 1");
  }
  if (n_take > n) {
    throw Error(Errc::insufficient_samples,
                fmt::format("requested {} samples but only {} are available", n_take, n));
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < n_take; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.bounded(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(n_take);
  return idx;
}

Matrix gather_rows(const MatrixView& m, std::span<const std::size_t> rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out(static_cast<Eigen::Index>(i), j) = m(static_cast<Eigen::Index>(rows[i]), j);
    }
  }
  return out;
}

FeatureMatrix subsample(const FeatureMatrix& feats, std::size_t n_take, std::uint64_t seed) {
  const auto idx = subsample_indices(feats.rows(), n_take, seed);
  return FeatureMatrix(gather_rows(feats.data(), idx));
}

std::vector<RowRange> split_ranges(std::size_t n, std::size_t k) {
  if (k == 0) {
    throw Error(Errc::invalid_argument, "number of splits must be at least 1");
  }
  if (k > n) {
    throw Error(Errc::insufficient_samples,
                fmt::format("cannot split {} rows into {} blocks", n, k));
  }
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  std::vector<RowRange> out;
  out.reserve(k);
  std::size_t begin = 0;
  for (std::size_t b = 0; b < k; ++b) {
    const std::size_t size = base + (b < extra ? 1 : 0);
    out.push_back({begin, size});
    begin += size;
  }
  return out;
}

std::vector<FeatureMatrix> split_k(const FeatureMatrix& feats, std::size_t k) {
  std::vector<FeatureMatrix> out;
  for (const RowRange& r : split_ranges(feats.rows(), k)) {
    out.emplace_back(Matrix(feats.data().middleRows(static_cast<Eigen::Index>(r.begin),
                                                     static_cast<Eigen::Index>(r.size))));
  }
  return out;
}

Matrix log_softmax_rows(const MatrixView& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double mx = logits.row(i).maxCoeff();
    double s = 0.0;
    for (Eigen::Index c = 0; c < logits.cols(); ++c) s += std::exp(logits(i, c) - mx);
    const double lse = std::log(s);
    for (Eigen::Index c = 0; c < logits.cols(); ++c) out(i, c) = logits(i, c) - mx - lse;
  }
  return out;
}

Matrix softmax_rows(const LogitMatrix& logits) {
  const Matrix& x = logits.data();
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double mx = x.row(i).maxCoeff();
    double s = 0.0;
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      out(i, c) = std::exp(x(i, c) - mx);
      s += out(i, c);
    }
    for (Eigen::Index c = 0; c < x.cols(); ++c) out(i, c) /= s;
  }
  return out;
}

namespace {

MeanStd mean_std(std::span<const double> values, bool sample) {
  if (values.empty()) {
    throw Error(Errc::degenerate_input, "mean of an empty sequence");
  }
  double s = 0.0;
  for (double v : values) s += v;
  const double n = static_cast<double>(values.size());
  const double mean = s / n;
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (sample ? n - 1.0 : n))};
}

}  // namespace

MeanStd population_mean_std(std::span<const double> values) { return mean_std(values, false); }
MeanStd sample_mean_std(std::span<const double> values) { return mean_std(values, true); }

}  // namespace ganeval
