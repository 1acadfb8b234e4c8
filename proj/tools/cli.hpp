#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace conelab {

/// Runs the command-line front end. Exit codes: 0 success, 1 inconclusive
/// verdict under --strict, failed verification or capacity limits, 2 input
/// errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace conelab
