#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace cascade {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Runs one `cascade` subcommand. `args` includes the program name. Reports go
// to files under --out; summaries to `out`, diagnostics to `err`.
int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace cascade
