// SPDX-License-Identifier: Apache-2.0
#include "ganeval/matrix.hpp"

#include <cmath>

#include <fmt/core.h>

#include "ganeval/error.hpp"

namespace ganeval {

void require_finite(const MatrixView& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j))) {
        throw Error(Errc::format,
                    fmt::format("non-finite value {} at row {}, col {}", m(i, j), i, j));
      }
    }
  }
}

FeatureMatrix::FeatureMatrix(Matrix data) : data_(std::move(data)) {
  if (data_.rows() < 1 || data_.cols() < 1) {
    throw Error(Errc::degenerate_input,
                fmt::format("feature matrix must be at least 1x1, got {}x{}", data_.rows(),
                            data_.cols()));
  }
  require_finite(data_);
}

LogitMatrix::LogitMatrix(Matrix data) : data_(std::move(data)) {
  if (data_.rows() < 1) {
    throw Error(Errc::degenerate_input, "logit matrix has no rows");
  }
  if (data_.cols() < 2) {
    throw Error(Errc::degenerate_input,
                fmt::format("logit matrix needs at least 2 classes, got {}", data_.cols()));
  }
  require_finite(data_);
}

}  // namespace ganeval
