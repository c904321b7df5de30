#pragma once

#include <ostream>

namespace oqrw::cli {

/// Exit codes shared by all subcommands.
enum ExitCode : int {
  kOk = 0,
  /// Validation failed, criterion fails, or the inputs do not fit together.
  kFailed = 1,
  /// Unreadable input or bad arguments.
  kBadInput = 2,
  kInconclusive = 3,
  kPrecondition = 4,
};

/// Runs one command line. Results go to `out`, diagnostics to `err`; nothing is
/// written to `out` or to output files unless the command succeeds.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace oqrw::cli
