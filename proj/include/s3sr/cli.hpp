#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace s3sr {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitUsage = 2,
  kExitConstruction = 3,
  kExitNoConvergence = 4,
};

// Runs the command line (args excludes the program name). Results go to out,
// warnings and errors to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace s3sr
