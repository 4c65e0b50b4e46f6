#pragma once

// Command-line front end: barriers, pair, flow, ancient, blowup, fit, verify.
//
// Exit codes: 0 pass, 1 check failure (or a failed run), 2 usage or
// parameter validation error.

#include <iosfwd>

namespace dncsf::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Parses argv and runs the selected command. Reports go to `out`,
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dncsf::cli
