// SPDX-License-Identifier: Apache-2.0
#include "ganeval/fid.hpp"

#include <cmath>

#include <fmt/core.h>

#include "ganeval/error.hpp"
#include "ganeval/linalg.hpp"

namespace ganeval {

namespace {

[[noreturn]] void throw_sqrtm_failure(const Matrix& cov_a, const Matrix& cov_b) {
  const double ka = condition_number(symmetric_eigen(cov_a, false).values);
  const double kb = condition_number(symmetric_eigen(cov_b, false).values);
  throw Error(Errc::numerical_failure,
              fmt::format("matrix square root produced non-finite values "
                          "(condition numbers: {:.6g}, {:.6g})",
                          ka, kb));
}

void check_dims(const GaussianStats& a, const GaussianStats& b) {
  if (a.dim() != b.dim()) {
    throw Error(Errc::dimension_mismatch,
                fmt::format("feature dimensions differ: {} vs {}", a.dim(), b.dim()));
  }
}

double finish_distance(const GaussianStats& a, const GaussianStats& b, double trace_sqrt) {
  const double mean_term = (a.mean - b.mean).squaredNorm();
  const double value = mean_term + a.cov.trace() + b.cov.trace() - 2.0 * trace_sqrt;
  if (value >= 0.0) return value;
  if (value >= -kFidClampTolerance) return 0.0;
  throw Error(Errc::numerical_failure,
              fmt::format("Frechet distance {:.6g} is below the clamp tolerance {:.1g}", value,
                          -kFidClampTolerance));
}

}  // namespace

double sqrtm_product_trace(const Matrix& cov_a, const Matrix& cov_b) {
  if (cov_a.rows() != cov_b.rows() || cov_a.rows() != cov_a.cols() ||
      cov_b.rows() != cov_b.cols()) {
    throw Error(Errc::dimension_mismatch,
                fmt::format("covariances must be square and equal-sized, got {}x{} and {}x{}",
                            cov_a.rows(), cov_a.cols(), cov_b.rows(), cov_b.cols()));
  }
  if (!cov_a.allFinite() || !cov_b.allFinite()) throw_sqrtm_failure(cov_a, cov_b);

  const SymmetricEigen eig_a = symmetric_eigen(cov_a, true);
  if (!eig_a.ok || !eig_a.values.allFinite()) throw_sqrtm_failure(cov_a, cov_b);
  const Matrix root_a = psd_sqrt(eig_a);

  Matrix s = root_a * cov_b * root_a;
  s = 0.5 * (s + s.transpose()).eval();
  const SymmetricEigen eig_s = symmetric_eigen(s, false);
  if (!eig_s.ok) throw_sqrtm_failure(cov_a, cov_b);

  const double floor = eigen_noise_floor(eig_s.values);
  double trace = 0.0;
  for (Eigen::Index i = 0; i < eig_s.values.size(); ++i) {
    if (eig_s.values(i) > floor) trace += std::sqrt(eig_s.values(i));
  }
  if (!std::isfinite(trace)) throw_sqrtm_failure(cov_a, cov_b);
  return trace;
}

double frechet_distance(const GaussianStats& a, const GaussianStats& b) {
  check_dims(a, b);
  return finish_distance(a, b, sqrtm_product_trace(a.cov, b.cov));
}

FidScore compute_fid(const FeatureMatrix& real, const FeatureMatrix& fake) {
  return compute_fid(real.data(), fake.data());
}

FidScore compute_fid(const MatrixView& real, const MatrixView& fake) {
  if (real.cols() != fake.cols()) {
    throw Error(Errc::dimension_mismatch,
                fmt::format("feature dimensions differ: {} vs {}", real.cols(), fake.cols()));
  }
  GaussianStats a = fit_gaussian(real);
  GaussianStats b = fit_gaussian(fake);

  FidScore score;
  score.n_real = static_cast<std::size_t>(real.rows());
  score.n_fake = static_cast<std::size_t>(fake.rows());

  double trace_sqrt = 0.0;
  try {
    trace_sqrt = sqrtm_product_trace(a.cov, b.cov);
  } catch (const Error& e) {
    if (e.code() != Errc::numerical_failure) throw;
    const Eigen::Index d = a.cov.rows();
    a.cov += kFidEpsilon * Matrix::Identity(d, d);
    b.cov += kFidEpsilon * Matrix::Identity(d, d);
    trace_sqrt = sqrtm_product_trace(a.cov, b.cov);
    score.epsilon_applied = true;
  }
  score.value = finish_distance(a, b, trace_sqrt);
  return score;
}

}  // namespace ganeval
