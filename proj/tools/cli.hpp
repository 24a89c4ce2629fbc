#pragma once

#include <string>
#include <vector>

namespace edgerecon_cli {

// Runs the command line and returns the process exit code:
// 0 success, 2 configuration error, 3 runtime/numerical error, 4 I/O error.
int run(const std::vector<std::string>& args);

}  // namespace edgerecon_cli
