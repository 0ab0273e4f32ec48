#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace elguard::cli {

/// Exit codes of the el-guard executable.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRejected = 1;  // e.g. TERMINATED under --expect landed
inline constexpr int kExitUsage = 2;     // usage, I/O and configuration errors

/// Runs one el-guard invocation. args[0] is the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace elguard::cli
