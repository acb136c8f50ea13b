// SPDX-License-Identifier: Apache-2.0
#include "ganeval/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <vector>

#include <fmt/core.h>

#include "ganeval/error.hpp"
#include "ganeval/npy.hpp"

namespace ganeval {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

Matrix read_csv(std::istream& in, const CsvOptions& opts, const std::string& source) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  std::size_t blank_after = 0;  // line number of a blank line seen before more data
  std::string line;

  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && opts.skip_header) continue;
    const std::string_view whole = trim(line);
    if (whole.empty()) {
      if (blank_after == 0) blank_after = line_no;
      continue;
    }
    if (blank_after != 0) {
      throw Error(Errc::format, fmt::format("{}:{}: blank line inside data", source, blank_after));
    }

    std::size_t n_cells = 0;
    std::string_view rest = line;
    for (;;) {
      const std::size_t comma = rest.find(',');
      const std::string_view cell = trim(rest.substr(0, comma));
      double v = 0.0;
      const char* first = cell.data();
      const char* last = cell.data() + cell.size();
      if (!cell.empty() && *first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (cell.empty() || ec != std::errc() || ptr != last) {
        throw Error(Errc::format, fmt::format("{}:{}: non-numeric cell '{}' in column {}", source,
                                              line_no, cell, n_cells + 1));
      }
      if (!std::isfinite(v)) {
        throw Error(Errc::format, fmt::format("{}:{}: non-finite value in column {}", source,
                                              line_no, n_cells + 1));
      }
      values.push_back(v);
      ++n_cells;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (rows == 0) {
      cols = n_cells;
    } else if (n_cells != cols) {
      throw Error(Errc::format, fmt::format("{}:{}: ragged row with {} cells, expected {}", source,
                                            line_no, n_cells, cols));
    }
    ++rows;
  }
  if (in.bad()) throw Error(Errc::io, fmt::format("{}: read error", source));
  if (rows == 0) throw Error(Errc::format, fmt::format("{}: no data rows", source));

  Matrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i * cols + j];
    }
  }
  return out;
}

FeatureMatrix read_csv_features(const std::filesystem::path& path, const CsvOptions& opts) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, fmt::format("{}: cannot open for reading", path.string()));
  return FeatureMatrix(read_csv(in, opts, path.string()));
}

Matrix read_matrix_file(const std::filesystem::path& path, const CsvOptions& csv) {
  const std::string ext = path.extension().string();
  if (ext == ".npy") return read_npy(path).data;
  if (ext == ".csv" || ext == ".txt") {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io, fmt::format("{}: cannot open for reading", path.string()));
    return read_csv(in, csv, path.string());
  }
  throw Error(Errc::format,
              fmt::format("{}: unrecognised extension (expected .npy or .csv)", path.string()));
}

}  // namespace ganeval
