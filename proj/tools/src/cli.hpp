#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lyz::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidConfig = 1,
  kComputationFailure = 2,
  kVerificationFailure = 3,
};

/// Parses args (without the program name), validates every parameter, then
/// runs the subcommand. Artifacts go to --out or, by default, to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "a:b:step" -> a, a + step, ... up to b inclusive (within 1e-9 step).
std::vector<double> parse_grid(const std::string& text);

}  // namespace lyz::cli
