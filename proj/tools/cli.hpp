#pragma once

#include <iosfwd>

namespace injurybench::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2, kIncomplete = 3 };

/// Entry point of the command-line tool; output goes to the given streams.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace injurybench::cli
