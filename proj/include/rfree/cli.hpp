#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rfree {

/// Process exit statuses shared by every command.
enum ExitCode : int {
  kExitPass = 0,
  kExitFail = 1,
  kExitUndecided = 2,
  kExitBudget = 3,
  kExitInput = 4,
};

/// Runs one command line (without the program name). Artifacts go to
/// --out when given, otherwise to `out`; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rfree
