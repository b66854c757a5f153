#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hhineq::cli {

// Exit codes: 0 success, 1 invocation or domain error, 2 verification failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitVerificationFailed = 2;

// Runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hhineq::cli
