#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qcomp::cli {

/// Exit codes of `run`.
enum ExitCode : int {
  kOk = 0,
  kViolations = 1,
  kValidation = 2,
  kSolver = 3,
};

/// Runs one subcommand; args excludes the program name. Reports go to `out`
/// (or the --output file), structured errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace qcomp::cli
