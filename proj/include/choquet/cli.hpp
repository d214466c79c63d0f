#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace choquet::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kDataError = 2,
  kNumericError = 3,
};

/// Runs the tool with argv-style arguments (args[0] is the program name).
/// Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace choquet::cli
