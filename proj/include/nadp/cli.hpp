#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nadp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs the `nadp` command line with `args` (program name excluded).
/// Returns 0 on success, 1 on runtime errors and 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nadp
