#pragma once

/**
 * Command-line front end. Exit codes: 0 success, 1 usage error or failed
 * selftest, 2 parse error, 3 validation error, 4 not a factor form (fg).
 */

#include <ostream>
#include <string>
#include <vector>

namespace vnfp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitNotAFactorForm = 4;

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vnfp
