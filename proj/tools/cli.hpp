// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kob::cli {

/// Exit codes shared by every subcommand.
enum Exit : int {
  ok = 0,
  input_error = 2,     ///< bad input or numerically ambiguous request
  verified_negative = 3, ///< uncovered family or failed verdict
};

/// Runs the command line `args` (args[0] is the program name). Results go to
/// `out`, diagnostics and the verify summary table to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace kob::cli
