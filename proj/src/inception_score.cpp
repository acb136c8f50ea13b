// SPDX-License-Identifier: Apache-2.0
#include "ganeval/inception_score.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/core.h>

#include "ganeval/error.hpp"
#include "ganeval/stats.hpp"

namespace ganeval {

namespace {

double split_score(const MatrixView& log_p) {
  const Eigen::Index n = log_p.rows();
  const Eigen::Index c = log_p.cols();

  Vector marginal = Vector::Zero(c);
  for (Eigen::Index k = 0; k < c; ++k) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) s += std::exp(log_p(i, k));
    marginal(k) = s / static_cast<double>(n);
  }
  Vector log_marginal(c);
  for (Eigen::Index k = 0; k < c; ++k) {
    log_marginal(k) = std::log(std::max(marginal(k), kMarginalLogFloor));
  }

  double kl_total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double kl = 0.0;
    for (Eigen::Index k = 0; k < c; ++k) {
      const double p = std::exp(log_p(i, k));
      if (p > 0.0) kl += p * (log_p(i, k) - log_marginal(k));
    }
    kl_total += kl;
  }
  double mean_kl = kl_total / static_cast<double>(n);
  if (!std::isfinite(mean_kl)) {
    throw Error(Errc::numerical_failure, "non-finite KL divergence in inception score");
  }
  // KL to the marginal is bounded by [0, log C]; clamp round-off.
  mean_kl = std::clamp(mean_kl, 0.0, std::log(static_cast<double>(c)));
  return std::exp(mean_kl);
}

IsScore score_splits(const Matrix& log_p, std::size_t splits) {
  if (splits == 0) {
    throw Error(Errc::invalid_argument, "number of splits must be at least 1");
  }
  const auto blocks = split_ranges(static_cast<std::size_t>(log_p.rows()), splits);
  IsScore out;
  out.splits = splits;
  for (const RowRange& r : blocks) {
    out.split_values.push_back(split_score(log_p.middleRows(static_cast<Eigen::Index>(r.begin),
                                                            static_cast<Eigen::Index>(r.size))));
  }
  const MeanStd ms = population_mean_std(out.split_values);
  out.mean = ms.mean;
  out.std = ms.std;
  return out;
}

}  // namespace

IsScore inception_score(const LogitMatrix& logits, std::size_t splits) {
  if (splits > logits.rows()) {
    throw Error(Errc::insufficient_samples,
                fmt::format("cannot split {} rows into {} blocks", logits.rows(), splits));
  }
  return score_splits(log_softmax_rows(logits.data()), splits);
}

IsScore inception_score_from_probabilities(const MatrixView& probs, std::size_t splits) {
  if (probs.cols() < 2) {
    throw Error(Errc::degenerate_input,
                fmt::format("need at least 2 classes, got {}", probs.cols()));
  }
  if (splits > static_cast<std::size_t>(probs.rows())) {
    throw Error(Errc::insufficient_samples,
                fmt::format("cannot split {} rows into {} blocks", probs.rows(), splits));
  }
  Matrix log_p(probs.rows(), probs.cols());
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < probs.cols(); ++k) {
      const double p = probs(i, k);
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw Error(Errc::format,
                    fmt::format("probability at row {}, col {} is not a finite nonnegative value",
                                i, k));
      }
      s += p;
      log_p(i, k) = p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
    }
    if (std::abs(s - 1.0) > kProbabilityRowSumTolerance) {
      throw Error(Errc::format,
                  fmt::format("probability row {} sums to {:.10g}, expected 1", i, s));
    }
  }
  return score_splits(log_p, splits);
}

}  // namespace ganeval
