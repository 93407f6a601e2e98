#pragma once

#include <string>
#include <vector>

namespace otdr::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidationError = 1;  // bad flags, bad config, missing inputs
inline constexpr int kRuntimeError = 2;     // I/O, corrupt files, divergence

// Runs one subcommand. args excludes the program name.
int dispatch(const std::vector<std::string>& args);
int dispatch(int argc, const char* const* argv);

}  // namespace otdr::cli
