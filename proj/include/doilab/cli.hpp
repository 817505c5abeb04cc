#pragma once

#include <string>
#include <vector>

namespace doilab::cli {

// Subcommands verify, symbols, transfer, sweep and weak. Returns 0 on
// success, 1 when a suite or check fails, 2 on a usage or config error
// (in which case nothing is written).
int run(int argc, char** argv);
// Same, with args excluding the program name.
int run(const std::vector<std::string>& args);

}  // namespace doilab::cli
