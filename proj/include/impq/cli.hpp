#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace impq {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kExitPass = 0, kExitCheckFailure = 1, kExitUsage = 2 };

/// Subcommands: verify, spin-example, gap, sweep. `args` excludes the
/// program name.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cli_dispatch(int argc, char** argv);

}  // namespace impq
