// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace isoq::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,   // type or semantic failure
  kParse = 2,
  kFuel = 3,
  kOverflow = 4,  // truncation leaked
};

/// Runs one command. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace isoq::cli
