#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sclab {

// Full command-line driver: parses argv, dispatches to the checkers and
// writes the report to `out`. Returns the process exit code: 0 when the
// command succeeded (checks hold), 1 when a check failed with a witness,
// 2 on usage or configuration errors.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace sclab
