#ifndef MRISEG_CLI_APP_HPP
#define MRISEG_CLI_APP_HPP

#include <string>
#include <vector>

namespace mriseg::cli {

/// Parses and runs one invocation. Exit codes: 0 success, 1 runtime or I/O
/// failure, 2 usage or validation failure.
int run(const std::vector<std::string>& args);

int run(int argc, const char* const* argv);

}  // namespace mriseg::cli

#endif
