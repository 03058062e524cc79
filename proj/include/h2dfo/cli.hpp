#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace h2dfo {

/// Parses argv (argv[0] is the program name) and runs one subcommand:
/// solve, compare, profile, repro-table2 or repro-example1. Returns the exit
/// status; diagnostics go to `err` as a single line.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace h2dfo
