#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fracocycle::cli {

enum ExitCode : int {
    Success = 0,
    Failure = 1,
    ValidationFailed = 2,
    ConfigInvalid = 3,
    ResourceLimit = 4,
};

/// Runs one command line (without the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fracocycle::cli
