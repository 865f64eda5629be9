#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace collab::tools {

// Runs one subcommand; args[0] is the program name. Exit codes: 0 success,
// 1 analysis failure (infeasible region, degenerate input, failed report
// section), 2 input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace collab::tools
