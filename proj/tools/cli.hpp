#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace unisr::cli {

enum ExitCode : int {
    kOk = 0,
    kVerificationFailed = 1,
    kUsage = 2,
    kRuntimeFailure = 3,
};

/// Runs one `unisr` subcommand. args[0] is the program name. Primary output
/// goes to the --out file when given, otherwise to `out`; diagnostics go to
/// `err`. Returns one of ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace unisr::cli
