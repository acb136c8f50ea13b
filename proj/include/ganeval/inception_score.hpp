// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "ganeval/matrix.hpp"

namespace ganeval {

/// Floor applied to the marginal class probability before taking its log.
inline constexpr double kMarginalLogFloor = 1e-300;
/// Allowed deviation of a row sum from 1 for probability input.
inline constexpr double kProbabilityRowSumTolerance = 1e-6;

struct IsScore {
  std::vector<double> split_values;
  double mean = 0.0;
  double std = 0.0;  // population (divides by splits)
  std::size_t splits = 0;
};

/// exp(mean_x KL(p(y|x) || p(y))) per contiguous split, with the marginal
/// p(y) taken over the split. 0 log 0 is 0. Each split value lies in
/// [1, C].
IsScore inception_score(const LogitMatrix& logits, std::size_t splits);

/// Same score from class probabilities. Rows must be nonnegative and sum to
/// 1 within kProbabilityRowSumTolerance.
IsScore inception_score_from_probabilities(const MatrixView& probs, std::size_t splits);

}  // namespace ganeval
