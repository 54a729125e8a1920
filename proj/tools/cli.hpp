#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace l2relax::cli {

/// Exit codes: 0 success, 1 numerical failure, 2 usage or configuration error.
enum ExitCode : int { kOk = 0, kNumerical = 1, kUsage = 2 };

/// Run the command line `args` (args[0] is the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace l2relax::cli
