#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gibbsnet::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kOracleMismatch = 1,     // some probe has |z| > 5
    kConfigError = 2,        // bad config, flags, dataset contents or dimensions
    kAcceptanceTooLow = 3,   // rejection sampling exhausted max_attempts
    kIoError = 4,            // file could not be read or written
};

/// Runs one subcommand. `args` excludes the program name. Data goes to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gibbsnet::cli
