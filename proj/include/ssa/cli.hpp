#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ssa::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2 };

/// Runs the command line (args excludes the program name). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ssa::cli
