#pragma once

// Command-line front end: simulate, fit, crossval, embed, impute, report.
// Exit codes: 0 success, 2 invalid input / parse / IO errors, 3 numerical failure.

#include <iosfwd>
#include <string>
#include <vector>

namespace multiness::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNumerical = 3;

// `args` excludes the program name. Progress goes to `err`; machine output is
// written to files only.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace multiness::cli
