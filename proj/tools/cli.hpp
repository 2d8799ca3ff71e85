#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vartopic::cli {

enum ExitCode : int { ok = 0, numerical_failure = 1, bad_input = 2 };

/// Runs `vartopic <subcommand> ...`. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace vartopic::cli
