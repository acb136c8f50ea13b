// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

#include <cstddef>

namespace ganeval {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using MatrixView = Eigen::Ref<const Matrix>;

/// n x d embedding features, one row per sample. Entries are finite and
/// n, d >= 1; the constructor enforces both.
class FeatureMatrix {
 public:
  explicit FeatureMatrix(Matrix data);

  std::size_t rows() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(data_.cols()); }

  const Matrix& data() const noexcept { return data_; }
  Matrix release() && noexcept { return std::move(data_); }

  friend bool operator==(const FeatureMatrix& a, const FeatureMatrix& b) {
    return a.data_.rows() == b.data_.rows() && a.data_.cols() == b.data_.cols() &&
           a.data_ == b.data_;
  }

 private:
  Matrix data_;
};

/// n x C classifier logits (pre-softmax). Finite, C >= 2.
class LogitMatrix {
 public:
  explicit LogitMatrix(Matrix data);

  std::size_t rows() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  std::size_t classes() const noexcept { return static_cast<std::size_t>(data_.cols()); }

  const Matrix& data() const noexcept { return data_; }

 private:
  Matrix data_;
};

/// Throws Errc::format naming the first non-finite entry, if any.
void require_finite(const MatrixView& m);

}  // namespace ganeval
