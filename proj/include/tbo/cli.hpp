#pragma once

#include <iosfwd>

namespace tbo::cli {

/// Exit statuses of the command-line harness.
enum ExitCode : int { ok = 0, failure = 1, input_error = 2 };

/// Entry point behind the `tbo` executable: run, stats, plot, presets, validate.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tbo::cli
