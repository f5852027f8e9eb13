#pragma once

#include <iosfwd>

namespace fcmstop::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 2,    ///< bad flags, configuration or inputs
  kRuntimeError = 3,  ///< calibration or clustering failed
};

/// Entry point of the `fcmstop` tool. Results go to `out`, diagnostics and
/// progress to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fcmstop::cli
