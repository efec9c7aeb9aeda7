#pragma once

// Command-line front end. The process entry point forwards here so the
// commands can be exercised in-process by tests.

#include <ostream>

namespace hetcycle::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitIntegration = 3;

/// Runs one subcommand; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hetcycle::cli
