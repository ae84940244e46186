#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vb {

// Runs one CLI invocation (args excludes the program name).
// Exit codes: 0 success, 1 domain error (vb::Error), 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vb
