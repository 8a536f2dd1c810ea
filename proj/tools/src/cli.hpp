#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace prk::cli {

enum ExitCode : int {
  kSuccess = 0,
  kValidation = 2,
  kAlgorithmFailure = 3,
  kIoFailure = 4,
};

/// Runs the `prk` command line. `args` excludes the program name.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

/// Build tag embedded in every output artifact.
const char* build_tag() noexcept;

}  // namespace prk::cli
