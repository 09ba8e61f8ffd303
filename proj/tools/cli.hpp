#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mortgp::cli {

/// Runs one command line (args exclude the program name). Returns the
/// process exit status; 0 on success, nonzero on usage or module errors.
int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

} // namespace mortgp::cli
