#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dynpress::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kVerificationFailed = 1,
    kNoConvergence = 2,
    kInvalidInput = 3,
};

/// Entry point shared by the executable and the tests. args[0] is the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dynpress::cli
