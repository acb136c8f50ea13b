// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "ganeval/matrix.hpp"

namespace ganeval {

/// Axis-aligned Gaussian N(mean, diag(diag_cov)); every variance > 0.
struct DiagGaussian {
  Vector mean;
  Vector diag_cov;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(mean.size()); }
};

/// Broadcasts scalar mean/variance to d dimensions. Throws on var <= 0.
DiagGaussian make_diag_gaussian(std::size_t d, double mean, double var);
DiagGaussian make_diag_gaussian(Vector mean, Vector diag_cov);

struct SyntheticGaussianSpec {
  std::size_t n = 0;
  DiagGaussian dist;
  std::uint64_t seed = 0;
};

/// n x d draws filled row by row from NormalSampler(seed):
/// x[i][j] = mean[j] + sqrt(diag_cov[j]) * z.
FeatureMatrix synth_features(const SyntheticGaussianSpec& spec);

/// ||mu_a - mu_b||^2 + sum_i (sqrt(a_i) - sqrt(b_i))^2, the Frechet distance
/// between Gaussians with commuting (diagonal) covariances.
double closed_form_fid_diag(const Vector& mean_a, const Vector& diag_a, const Vector& mean_b,
                            const Vector& diag_b);
double closed_form_fid_diag(const DiagGaussian& a, const DiagGaussian& b);

struct BiasStudy {
  DiagGaussian real;
  DiagGaussian fake;
  std::vector<std::size_t> sample_sizes;  // strictly ascending, each >= 2
  std::size_t repeats = 50;               // >= 20
  std::uint64_t seed = 0;
};

struct BiasReport {
  std::vector<std::size_t> sample_sizes;
  std::size_t repeats = 0;
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  std::vector<double> per_size_mean_fid;
  std::vector<double> per_size_mean_kid;
  /// Standard errors of the per-size means (sample std / sqrt(repeats)).
  std::vector<double> per_size_se_fid;
  std::vector<double> per_size_se_kid;
  double true_fid = 0.0;
};

/// For each size n and repeat r, draws fresh n-row real/fake sets from the
/// streams derive_seed(seed, {n, r, fnv1a64("real"|"fake")}) and records
/// FID and single-split KID.
BiasReport fid_bias_curve(const BiasStudy& study);

/// "n,mean_fid,se_fid,mean_kid,se_kid,true_fid" rows.
void write_bias_csv(const BiasReport& report, std::ostream& out);

}  // namespace ganeval
