#pragma once

#include <string>
#include <vector>

namespace sgmine {

// Runs one command line (without the program name). Returns the process exit
// code: 0 on success, 1 on flag/usage errors, 2 on data or domain errors.
int run_cli(const std::vector<std::string>& args);

} // namespace sgmine
