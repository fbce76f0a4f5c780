// cli.hpp — Command-line entry point, callable in-process for testing.
// Exit codes: 0 success, 1 configuration/usage error, 2 numerical failure.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qsync {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qsync
