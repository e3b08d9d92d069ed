#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hardynil::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kPreconditionError = 3, kPrecisionError = 4 };

/// Runs one command line (without the program name).  CSV goes to `out`
/// unless --out names a file; summaries and errors go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hardynil::cli
