#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qss::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInvalidConfig = 1,
  kIdentityFailure = 2,
  kIoError = 3,
};

/// Entry point for `qss <subcommand> [flags]`; `args` excludes the program name.
///
///   run         Monte Carlo trials, aggregate JSON report
///   verify      identity suite, one PASS/FAIL line per check
///   synthesize  split unitary as JSON
///   sweep       detection probability over an angle grid (CSV or JSON)
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qss::cli
