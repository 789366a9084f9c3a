#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fidnp::cli {

enum ExitCode : int {
  kSuccess = 0,
  kCheckFailed = 1,  // a coverage/calibration cell failed
  kUserError = 2,
  kIoError = 3,
};

/// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fidnp::cli
