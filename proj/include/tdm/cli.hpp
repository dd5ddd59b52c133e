#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tdm {

/// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitInputError = 2,
    kExitInternalError = 3,
};

/// Runs the `tdm` command line (`args` excludes the program name):
/// build, view, generate, stats, serve.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace tdm
