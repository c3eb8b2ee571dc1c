#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lecopt {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,  // invalid input data or usage
  kExitInfeasible = 2,
  kExitIo = 3,
};

/// Entry point of the `lecopt` tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lecopt
