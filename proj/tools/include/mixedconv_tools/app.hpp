#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mixedconv::tools {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (args[0] is the program name).
///
/// Subcommands: verify, suite, young, sharpness, trace, stft-transfer,
/// window-change, weights-check. Exit 0 when every check passes, 1 when a
/// check fails (the failing record is named on `err`), 2 for usage and
/// config errors.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace mixedconv::tools
