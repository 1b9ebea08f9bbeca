#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mlsbm::cli {

enum ExitCode : int { kOk = 0, kRuntime = 1, kValidation = 2, kSizeGuard = 3 };

/// Entry point without argv[0]. Results go to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mlsbm::cli
