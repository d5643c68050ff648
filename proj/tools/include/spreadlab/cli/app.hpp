#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spreadlab::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,      // estimator or domain error
  kUsage = 2,        // bad flags or ConfigError
  kDiverged = 3,     // a simulation crossed the divergence ceiling
  kIoError = 4,      // missing or unwritable file
  kParseError = 5,   // malformed input, ordering or off-grid price
};

// Runs the spreadlab command line. `args` excludes the program name.
// Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "0.01" -> {1, 2}: price = ticks * numerator / 10^decimals.
struct DecimalTick {
  long long numerator = 1;
  int decimals = 0;
};
DecimalTick parse_decimal_tick(const std::string& text);

}  // namespace spreadlab::cli
