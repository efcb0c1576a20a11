#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace edgeckpt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // infeasible input or a failed check
inline constexpr int kExitUsage = 2;

/// Runs one `edgeckpt` invocation. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace edgeckpt::cli
