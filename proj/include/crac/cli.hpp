#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace crac {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitBoundViolation = 2,
  kExitTransport = 3,
};

/// Runs the command line (without the program name) and returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace crac
