#pragma once

#include <iosfwd>

namespace inac::cli {

/// Exit codes: 0 success, 1 validation or usage error, 2 infeasible or
/// degenerate result (output is still written).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace inac::cli
