#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pvseg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Parses `args` (without the program name) and runs the selected subcommand.
/// Progress goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pvseg::cli
