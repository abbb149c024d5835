#pragma once

#include <ostream>

namespace lexgraph::cli {

/// Exit status: 0 success (including flagged non-optimal solves), 2 input
/// or configuration errors, 1 internal errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lexgraph::cli
