#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polymac::cli {

/// Process exit codes of the workbench.
enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 1,
    kVerifyReject = 2,
    kBoundViolation = 3,
};

/// Runs the workbench with `args` (subcommand first, no program name).
/// Everything is written to `out` / `err`; nothing reads the environment.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polymac::cli
