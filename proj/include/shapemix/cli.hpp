#pragma once

#include <string>
#include <vector>

namespace shapemix::cli {

// Runs the command line given argv-style arguments (without the program
// name).  Exit codes: 0 success, 1 usage/domain error, 2 iteration cap.
int run(const std::vector<std::string>& args);

}  // namespace shapemix::cli
