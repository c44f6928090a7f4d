#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cfdim::cli {

// Runs the command line `args` (without the program name); returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cfdim::cli
