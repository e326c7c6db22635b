#pragma once

#include <iosfwd>

namespace fairnav {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitInfeasible = 2,
  kExitInternal = 3,
};

/// Entry point of the `fairnav` tool; errors go to `err` as one line.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fairnav
