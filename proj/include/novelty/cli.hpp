#pragma once

#include <iosfwd>

namespace novelty {

/// Runs one CLI invocation against the given streams. Exit codes:
/// 0 success (and "holds" verdicts), 2 usage or input parse error,
/// 3 property-check failure (witness printed to stdout), 1 internal error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace novelty
