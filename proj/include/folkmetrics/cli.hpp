#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace folkmetrics::cli {

// Runs the folkmetrics command line. args excludes the program name.
// Returns 0 on success, 1 on analysis errors, 2 on usage errors.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace folkmetrics::cli
