#pragma once

#include <string>
#include <vector>

namespace prk::cli {

/// Expands `--config <file>` into flag tokens inserted right after the
/// subcommand, so flags given on the command line (which come later) win.
/// The file is a JSON object whose keys are flag names without dashes;
/// underscores map to dashes. Arrays become comma-separated values, `true`
/// becomes a bare flag and `false` is dropped. Throws prk::Error (kIo/kParse).
std::vector<std::string> expand_config(const std::vector<std::string>& args);

}  // namespace prk::cli
