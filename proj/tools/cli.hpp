#pragma once

#include <iosfwd>

namespace ssgp::cli {

/// Runs the ssgp command line. Exit codes: 0 success, 1 usage or domain
/// error, 2 numerical failure (accuracy, matrix, degeneracy, statistics).
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ssgp::cli
