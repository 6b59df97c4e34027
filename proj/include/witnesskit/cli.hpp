#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace wk {

// Full command-line front end; args exclude the program name. Exit codes:
// 0 success (detection runs return 0 whether or not entanglement was found),
// 1 usage or data error, 2 inconclusive detection under --strict.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wk
