#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace alab {

// Exit codes: 0 success, 1 domain / contract / input error, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Runs one subcommand. args excludes the program name. Results without an
// -o path go to `out`; diagnostics go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Resolves the worker count: the flag if positive, otherwise
// ANTICIPATION_LAB_THREADS, otherwise 1.
int resolve_threads(int flag_value);

}  // namespace alab
