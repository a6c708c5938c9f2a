#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sqpt::cli {

/// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kBadArguments = 2,
  kChannelParseFailure = 3,
  kPhysicalityFailure = 4,
};

/// Runs one CLI invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace sqpt::cli
