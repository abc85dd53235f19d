#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ira::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line (arguments without the program name). Reports go to
/// `out` unless --output is given; diagnostics go to `err` as a single line.
/// Returns 0 on success, 1 on analysis failures, 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ira::cli
