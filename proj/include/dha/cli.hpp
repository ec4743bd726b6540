#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dha::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;  ///< failed suite, infeasible decomposition or runtime error
inline constexpr int kExitParse = 2;   ///< bad arguments or malformed input

/// Runs one command line (without the program name). Reports go to `out`,
/// or to the file named by -o; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace dha::cli
