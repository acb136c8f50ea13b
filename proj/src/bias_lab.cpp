// SPDX-License-Identifier: Apache-2.0
#include "ganeval/bias_lab.hpp"

#include <cmath>

#include <fmt/core.h>

#include "ganeval/error.hpp"
#include "ganeval/fid.hpp"
#include "ganeval/kid.hpp"
#include "ganeval/rng.hpp"
#include "ganeval/stats.hpp"

namespace ganeval {

DiagGaussian make_diag_gaussian(std::size_t d, double mean, double var) {
  const auto n = static_cast<Eigen::Index>(d);
  return make_diag_gaussian(Vector::Constant(n, mean), Vector::Constant(n, var));
}

DiagGaussian make_diag_gaussian(Vector mean, Vector diag_cov) {
  if (mean.size() < 1 || mean.size() != diag_cov.size()) {
    throw Error(Errc::dimension_mismatch,
                fmt::format("mean has length {}, variances have length {}", mean.size(),
                            diag_cov.size()));
  }
  for (Eigen::Index i = 0; i < diag_cov.size(); ++i) {
    if (!(diag_cov(i) > 0.0) || !std::isfinite(diag_cov(i))) {
      throw Error(Errc::invalid_argument,
                  fmt::format("variance {} must be positive and finite, got {}", i, diag_cov(i)));
    }
    if (!std::isfinite(mean(i))) {
      throw Error(Errc::invalid_argument, fmt::format("mean {} is not finite", i));
    }
  }
  return {std::move(mean), std::move(diag_cov)};
}

FeatureMatrix synth_features(const SyntheticGaussianSpec& spec) {
  const auto n = static_cast<Eigen::Index>(spec.n);
  const auto d = static_cast<Eigen::Index>(spec.dist.dim());
  const Vector sd = spec.dist.diag_cov.cwiseSqrt();
  NormalSampler normal(spec.seed);
  Matrix x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = spec.dist.mean(j) + sd(j) * normal.next();
  }
  return FeatureMatrix(std::move(x));
}

double closed_form_fid_diag(const Vector& mean_a, const Vector& diag_a, const Vector& mean_b,
                            const Vector& diag_b) {
  if (mean_a.size() != diag_a.size() || mean_b.size() != diag_b.size() ||
      mean_a.size() != mean_b.size()) {
    throw Error(Errc::dimension_mismatch, "closed-form FID arguments differ in dimension");
  }
  double value = (mean_a - mean_b).squaredNorm();
  for (Eigen::Index i = 0; i < diag_a.size(); ++i) {
    if (!(diag_a(i) > 0.0) || !(diag_b(i) > 0.0)) {
      throw Error(Errc::invalid_argument, "closed-form FID needs positive variances");
    }
    const double diff = std::sqrt(diag_a(i)) - std::sqrt(diag_b(i));
    value += diff * diff;
  }
  return value;
}

double closed_form_fid_diag(const DiagGaussian& a, const DiagGaussian& b) {
  return closed_form_fid_diag(a.mean, a.diag_cov, b.mean, b.diag_cov);
}

BiasReport fid_bias_curve(const BiasStudy& study) {
  if (study.real.dim() != study.fake.dim()) {
    throw Error(Errc::dimension_mismatch, "real and fake distributions differ in dimension");
  }
  if (study.sample_sizes.empty()) {
    throw Error(Errc::invalid_argument, "bias study needs at least one sample size");
  }
  for (std::size_t i = 0; i < study.sample_sizes.size(); ++i) {
    if (study.sample_sizes[i] < 2) {
      throw Error(Errc::invalid_argument, "sample sizes must be at least 2");
    }
    if (i > 0 && study.sample_sizes[i] <= study.sample_sizes[i - 1]) {
      throw Error(Errc::invalid_argument, "sample sizes must be strictly ascending");
    }
  }
  if (study.repeats < 20) {
    throw Error(Errc::invalid_argument,
                fmt::format("bias study needs at least 20 repeats, got {}", study.repeats));
  }

  BiasReport report;
  report.sample_sizes = study.sample_sizes;
  report.repeats = study.repeats;
  report.dim = study.real.dim();
  report.seed = study.seed;
  report.true_fid = closed_form_fid_diag(study.real, study.fake);

  const std::uint64_t real_tag = fnv1a64("real");
  const std::uint64_t fake_tag = fnv1a64("fake");
  const double sqrt_repeats = std::sqrt(static_cast<double>(study.repeats));
  for (std::size_t n : study.sample_sizes) {
    std::vector<double> fids;
    std::vector<double> kids;
    for (std::size_t r = 0; r < study.repeats; ++r) {
      const FeatureMatrix real =
          synth_features({n, study.real, derive_seed(study.seed, {n, r, real_tag})});
      const FeatureMatrix fake =
          synth_features({n, study.fake, derive_seed(study.seed, {n, r, fake_tag})});
      fids.push_back(compute_fid(real, fake).value);
      kids.push_back(mmd2_unbiased(real, fake));
    }
    const MeanStd f = sample_mean_std(fids);
    const MeanStd k = sample_mean_std(kids);
    report.per_size_mean_fid.push_back(f.mean);
    report.per_size_se_fid.push_back(f.std / sqrt_repeats);
    report.per_size_mean_kid.push_back(k.mean);
    report.per_size_se_kid.push_back(k.std / sqrt_repeats);
  }
  return report;
}

void write_bias_csv(const BiasReport& report, std::ostream& out) {
  out << "n,mean_fid,se_fid,mean_kid,se_kid,true_fid\n";
  for (std::size_t i = 0; i < report.sample_sizes.size(); ++i) {
    out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", report.sample_sizes[i],
                       report.per_size_mean_fid[i], report.per_size_se_fid[i],
                       report.per_size_mean_kid[i], report.per_size_se_kid[i], report.true_fid);
  }
}

}  // namespace ganeval
