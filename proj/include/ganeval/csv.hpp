// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <istream>
#include <string>

#include "ganeval/matrix.hpp"

namespace ganeval {

struct CsvOptions {
  bool skip_header = false;
};

/// Comma-separated numeric rows, parsed as float64. Every row must have the
/// same number of cells; errors name the 1-based line number.
Matrix read_csv(std::istream& in, const CsvOptions& opts = {}, const std::string& source = "<stream>");
FeatureMatrix read_csv_features(const std::filesystem::path& path, const CsvOptions& opts = {});

/// Loads a matrix from ".npy" or ".csv" by extension.
Matrix read_matrix_file(const std::filesystem::path& path, const CsvOptions& csv = {});

}  // namespace ganeval
