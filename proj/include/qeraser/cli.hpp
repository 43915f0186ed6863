#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qeraser {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAuditFailed = 1;
inline constexpr int kExitUsage = 2;

/// `args` excludes the program name. Data goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qeraser
