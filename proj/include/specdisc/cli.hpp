#pragma once

#include <ostream>

namespace specdisc {

/// Exit codes: 0 completed (any verdict), 2 bad input, 3 internal
/// consistency failure, 4 required convergence not reached.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace specdisc
