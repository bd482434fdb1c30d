#pragma once

#include <string>
#include <vector>

namespace dsep {

// Exit codes: 0 success, 1 validation error, 2 numerical failure.
// args excludes the program name.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace dsep
