#pragma once

#include <iosfwd>

namespace algdyn::cli {

/// Exit codes: 0 success, 2 input error, 3 budget, convergence or consistency failure.
/// Reports go to out; errors are structured JSON on err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace algdyn::cli
