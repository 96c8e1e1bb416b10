#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nqd {

/// Runs the command line `nqd <subcommand> [flags]`; args excludes the program
/// name. Results go to --output (stdout by default), diagnostics to err.
/// Exit codes: 0 success (including an explicit empty result when nothing is
/// bound), 1 numerical failure, 2 invalid input.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shipped data directory (nuclide table, materials, sample dataset).
std::string default_data_dir();

}  // namespace nqd
