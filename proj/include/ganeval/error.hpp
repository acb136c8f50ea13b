// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ganeval {

enum class Errc {
  invalid_argument,    // bad parameters or flags
  degenerate_input,    // e.g. fewer than two rows for a covariance
  insufficient_samples,
  dimension_mismatch,
  format,              // malformed NPY/CSV/JSON
  io,
  numerical_failure,
  hparam_discrepancy,
  step_regression,
  corrupt_run,
  run_locked,
};

std::string_view errc_name(Errc code) noexcept;

/// Process exit status for a given error category.
///   1 usage, 2 input/format, 3 numerical failure, 4 registry discrepancy.
int exit_code_for(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ganeval
