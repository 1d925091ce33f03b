#pragma once

#include <string>
#include <vector>

namespace mfg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotConverged = 2;

/// Dispatches `solve`, `bilevel` or `sweep`. Returns 0 on success, 2 when an equilibrium
/// solve did not converge (outputs are still written) and 1 on any error.
/// `args` excludes the program name.
int run_command(const std::vector<std::string>& args);
int run_command(int argc, const char* const* argv);

}  // namespace mfg::cli
