#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pcyl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitPrecondition = 3;
inline constexpr int kExitInvariant = 4;

/// Runs the command line `args` (without the program name). Results go to
/// `out` unless an output path is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pcyl::cli
