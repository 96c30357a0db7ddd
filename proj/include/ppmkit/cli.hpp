#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ppmkit {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;

/// Runs one `ppmkit` subcommand. `args` excludes the program name. Machine
/// output goes to `out`, diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ppmkit
