// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ganeval {

/// Runs the command-line tool with args[0] as the program name and returns
/// the process exit status: 0 ok, 1 usage, 2 input/format, 3 numerical
/// failure, 4 registry discrepancy.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ganeval
