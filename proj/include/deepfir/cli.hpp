#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace deepfir {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Subcommands: process, eval, latency, bench, inspect-weights, init-weights.
// Results go to `out` (JSON); every error is a single line on `err`.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace deepfir
