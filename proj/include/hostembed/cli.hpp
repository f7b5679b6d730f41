#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hostembed::cli {

enum ExitCode : int {
  kOk = 0,
  kValidation = 2,
  kInfeasible = 3,
  kNumeric = 4,
};

// Parses `args` (without the program name), runs the subcommand and writes
// one JSON object (or CSV with --format csv) to `out`. Diagnostics and usage
// text go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hostembed::cli
