#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace erw {

// Parses and dispatches one command line (argv without the program name).
// Exit code 0 when every computed case passes, or when the command has no
// pass semantics; nonzero on parse errors, domain errors, or any failing
// residual.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

} // namespace erw
