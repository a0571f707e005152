#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace eepc::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kDomainError = 2 };

/// Runs the command line `args` (args[0] is the program name). Tables go to
/// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eepc::cli
