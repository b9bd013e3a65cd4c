#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cinsure::cli {

/// Exit codes: 0 solved/valid, 1 usage or validation error, 2 infeasible (no output written).
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInfeasible = 2;

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Fixed 9-digit decimal formatting used by every report.
std::string fixed(double v);

}  // namespace cinsure::cli
