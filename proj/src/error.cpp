// SPDX-License-Identifier: Apache-2.0
#include "ganeval/error.hpp"

namespace ganeval {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::degenerate_input: return "degenerate_input";
    case Errc::insufficient_samples: return "insufficient_samples";
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::format: return "format";
    case Errc::io: return "io";
    case Errc::numerical_failure: return "numerical_failure";
    case Errc::hparam_discrepancy: return "hparam_discrepancy";
    case Errc::step_regression: return "step_regression";
    case Errc::corrupt_run: return "corrupt_run";
    case Errc::run_locked: return "run_locked";
  }
  return "unknown";
}

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument:
      return 1;
    case Errc::degenerate_input:
    case Errc::insufficient_samples:
    case Errc::dimension_mismatch:
    case Errc::format:
    case Errc::io:
    case Errc::corrupt_run:
      return 2;
    case Errc::numerical_failure:
      return 3;
    case Errc::hparam_discrepancy:
    case Errc::step_regression:
    case Errc::run_locked:
      return 4;
  }
  return 1;
}

}  // namespace ganeval
