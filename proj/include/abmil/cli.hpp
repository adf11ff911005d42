#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace abmil {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitDataError = 1, kExitUsage = 2 };

/// Runs `abmil <subcommand> ...` with results on `out` and diagnostics on
/// `err`. args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace abmil
