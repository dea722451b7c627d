// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace logprep {

// Runs one command line (without the program name). Returns the exit code:
// 0 verified, 1 refuted, 2 invalid input or usage error, 3 inconclusive.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace logprep
