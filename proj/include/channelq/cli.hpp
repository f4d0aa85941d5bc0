#pragma once

#include <ostream>

namespace channelq {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitOracleMismatch = 3;

/// Runs the tool. Reports go to `out`, human-readable summaries to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace channelq
