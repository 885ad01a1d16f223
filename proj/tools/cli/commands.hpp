#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace asrsel::cli {

enum ExitCode : int { kOk = 0, kDataError = 1, kUsageError = 2 };

/// Runs one `asrsel` invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace asrsel::cli
