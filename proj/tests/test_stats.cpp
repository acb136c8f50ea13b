// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <numeric>
#include <set>

#include "doctest.h"

#include "ganeval/bias_lab.hpp"
#include "ganeval/error.hpp"
#include "ganeval/rng.hpp"
#include "ganeval/stats.hpp"
#include "oracles.hpp"

using namespace ganeval;

namespace {

FeatureMatrix rows_of(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return FeatureMatrix(std::move(m));
}

std::vector<std::vector<double>> sorted_rows(const Matrix& m) {
  std::vector<std::vector<double>> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out.emplace_back();
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.back().push_back(m(i, j));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("SplitMix64 matches the published reference stream") {
  SplitMix64 rng(1234567);
  CHECK(rng.next() == 6457827717110365317ULL);
  CHECK(rng.next() == 3203168211198807973ULL);
  CHECK(rng.next() == 9817491932198370423ULL);
  CHECK(rng.next() == 4593380528125082431ULL);
  CHECK(rng.next() == 16408922859458223821ULL);
  CHECK(SplitMix64(0).next() == 0xE220A8397B1DCDAFULL);
}

TEST_CASE("bounded draws stay in range and cover it") {
  SplitMix64 rng(5);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = rng.bounded(7);
    REQUIRE(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
  CHECK(SplitMix64(9).bounded(1) == 0);
}

TEST_CASE("derived seeds separate streams") {
  CHECK(derive_seed(0, "real") != derive_seed(0, "fake"));
  CHECK(derive_seed(0, "real") != derive_seed(1, "real"));
  CHECK(derive_seed(3, "fake") == derive_seed(3, "fake"));
  CHECK(derive_seed(7, {1, 2}) != derive_seed(7, {2, 1}));
}

TEST_CASE("fit_gaussian: two points use n-1 normalization") {
  const GaussianStats s = fit_gaussian(rows_of({{0.0}, {2.0}}));
  CHECK(s.mean(0) == 1.0);
  CHECK(s.cov(0, 0) == 2.0);
}

TEST_CASE("fit_gaussian: constant rows give zero covariance") {
  const GaussianStats s = fit_gaussian(rows_of({{1.5, -2.0, 3.0}, {1.5, -2.0, 3.0}, {1.5, -2.0, 3.0}}));
  CHECK(s.mean(0) == 1.5);
  CHECK(s.mean(1) == -2.0);
  CHECK(s.mean(2) == 3.0);
  CHECK(s.cov.isZero(0.0));
}

TEST_CASE("fit_gaussian: fewer than two rows is degenerate") {
  try {
    fit_gaussian(rows_of({{1.0, 2.0}}));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::degenerate_input);
  }
}

TEST_CASE("fit_gaussian recovers a standard 4-dim Gaussian") {
  const FeatureMatrix x = synth_features({100000, make_diag_gaussian(4, 0.0, 1.0), 7});
  const GaussianStats s = fit_gaussian(x);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(s.mean(i)) < 0.02);
  CHECK((s.cov - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("fit_gaussian matches the centered-product formula and is exactly symmetric") {
  const Matrix x = oracle::random_normal(2500, 6, 11, 0.5);
  const GaussianStats s = fit_gaussian(x);
  const Eigen::RowVectorXd mu = x.colwise().mean();
  const Matrix centered = x.rowwise() - mu;
  const Matrix ref = centered.transpose() * centered / (x.rows() - 1.0);
  CHECK((s.mean.transpose() - mu).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((s.cov - ref).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(s.cov == s.cov.transpose());
}

TEST_CASE("fit_gaussian is permutation invariant") {
  for (std::uint64_t trial = 0; trial < 5; ++trial) {
    const Matrix x = oracle::random_normal(300 + 50 * static_cast<int>(trial), 5, trial, 1.0);
    const auto perm = subsample_indices(static_cast<std::size_t>(x.rows()),
                                        static_cast<std::size_t>(x.rows()), 100 + trial);
    const Matrix shuffled = gather_rows(x, perm);
    const GaussianStats a = fit_gaussian(x);
    const GaussianStats b = fit_gaussian(shuffled);
    CHECK((a.mean - b.mean).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((a.cov - b.cov).cwiseAbs().maxCoeff() < 1e-13);
    // Same order in, same bits out.
    CHECK(fit_gaussian(shuffled).cov == b.cov);
  }
}

TEST_CASE("make_gaussian_stats symmetrizes and rejects negative variances") {
  Matrix c(2, 2);
  c << 1.0, 0.2, 0.4, 2.0;
  const GaussianStats s = make_gaussian_stats(Vector::Zero(2), c);
  CHECK(s.cov(0, 1) == doctest::Approx(0.3));
  CHECK(s.cov == s.cov.transpose());
  c(1, 1) = -1.0;
  CHECK_THROWS_AS(make_gaussian_stats(Vector::Zero(2), c), Error);
}

TEST_CASE("subsample: full sample is a permutation") {
  const FeatureMatrix x = rows_of({{0}, {1}, {2}, {3}, {4}});
  const FeatureMatrix s = subsample(x, 5, 42);
  std::vector<double> vals(s.data().data(), s.data().data() + 5);
  std::sort(vals.begin(), vals.end());
  CHECK(vals == std::vector<double>{0, 1, 2, 3, 4});
}

TEST_CASE("subsample is deterministic per seed") {
  const FeatureMatrix x = rows_of({{0, 10}, {1, 11}, {2, 12}, {3, 13}, {4, 14}});
  CHECK(subsample(x, 2, 0) == subsample(x, 2, 0));
  // Frozen selection: partial Fisher-Yates over SplitMix64(0).
  SplitMix64 rng(0);
  std::vector<std::size_t> idx{0, 1, 2, 3, 4};
  for (std::size_t i = 0; i < 2; ++i) std::swap(idx[i], idx[i + rng.bounded(5 - i)]);
  CHECK(subsample_indices(5, 2, 0) == std::vector<std::size_t>{idx[0], idx[1]});
}

TEST_CASE("subsample: rows form a sub-multiset of the input") {
  const FeatureMatrix x = rows_of({{1, 1}, {1, 1}, {2, 0}, {3, 5}, {2, 0}});
  CHECK(sorted_rows(subsample(x, 5, 99).data()) == sorted_rows(x.data()));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto idx = subsample_indices(5, 3, seed);
    CHECK(std::set<std::size_t>(idx.begin(), idx.end()).size() == 3);
    for (auto i : idx) CHECK(i < 5);
  }
}

TEST_CASE("subsample refuses to reuse rows") {
  const FeatureMatrix x = rows_of({{1}, {2}});
  try {
    subsample(x, 3, 0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::insufficient_samples);
  }
  CHECK_THROWS_AS(subsample(x, 0, 0), Error);
}

TEST_CASE("split_k block sizes") {
  auto sizes = [](std::size_t n, std::size_t k) {
    std::vector<std::size_t> out;
    for (const auto& r : split_ranges(n, k)) out.push_back(r.size);
    return out;
  };
  CHECK(sizes(50000, 10) == std::vector<std::size_t>(10, 5000));
  CHECK(sizes(10, 1) == std::vector<std::size_t>{10});
  CHECK(split_ranges(7, 3) == std::vector<RowRange>{{0, 3}, {3, 2}, {5, 2}});
  CHECK_THROWS_AS(split_ranges(3, 4), Error);
  CHECK_THROWS_AS(split_ranges(3, 0), Error);
}

TEST_CASE("split_k blocks are disjoint, ordered and cover every row") {
  for (std::size_t n = 1; n <= 40; ++n) {
    for (std::size_t k = 1; k <= n; ++k) {
      const auto blocks = split_ranges(n, k);
      REQUIRE(blocks.size() == k);
      std::size_t next = 0;
      for (const auto& b : blocks) {
        CHECK(b.begin == next);
        CHECK((b.size == n / k || b.size == n / k + 1));
        next += b.size;
      }
      CHECK(next == n);
    }
  }
  const FeatureMatrix x = rows_of({{0}, {1}, {2}, {3}, {4}, {5}, {6}});
  const auto parts = split_k(x, 3);
  CHECK(parts[0].rows() == 3);
  CHECK(parts[1].data()(0, 0) == 3.0);
  CHECK(parts[2].data()(1, 0) == 6.0);
  CHECK(split_k(x, 1)[0] == x);
}

TEST_CASE("softmax rows") {
  Matrix l(3, 3);
  l << 0, 0, -1e6, 1000, 0, 0, 1, 2, 3;
  const Matrix p = softmax_rows(LogitMatrix(l));
  CHECK(p(0, 0) == doctest::Approx(0.5));
  CHECK(p(0, 1) == doctest::Approx(0.5));
  CHECK(p(1, 0) == doctest::Approx(1.0));
  CHECK(p(1, 1) < 1e-300);
  CHECK(p.allFinite());
  CHECK(std::abs(p(2, 0) - 0.09003057) < 1e-7);
  CHECK(std::abs(p(2, 1) - 0.24472847) < 1e-7);
  CHECK(std::abs(p(2, 2) - 0.66524096) < 1e-7);
}

TEST_CASE("softmax row sums stay within 1e-12 of 1") {
  const Matrix l = oracle::random_normal(200, 1000, 3) * 20.0;
  const Matrix p = softmax_rows(LogitMatrix(l));
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    CHECK(std::abs(p.row(i).sum() - 1.0) <= 1e-12);
    CHECK(p.row(i).minCoeff() >= 0.0);
  }
}

TEST_CASE("matrix types enforce their invariants") {
  Matrix bad(2, 2);
  bad << 1, 2, std::numeric_limits<double>::quiet_NaN(), 4;
  CHECK_THROWS_AS(FeatureMatrix{bad}, Error);
  CHECK_THROWS_AS(FeatureMatrix{Matrix(0, 3)}, Error);
  CHECK_THROWS_AS(LogitMatrix{Matrix::Zero(4, 1)}, Error);
}

TEST_CASE("mean/std conventions") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  CHECK(population_mean_std(v).mean == 2.5);
  CHECK(population_mean_std(v).std == doctest::Approx(std::sqrt(1.25)));
  CHECK(sample_mean_std(v).std == doctest::Approx(std::sqrt(5.0 / 3.0)));
  const std::vector<double> one{7.0};
  CHECK(sample_mean_std(one).std == 0.0);
}
