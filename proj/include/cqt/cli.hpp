#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cqt {

// Command-line frontend.  `args` are the program arguments without the
// program name.  Exit codes: 0 success (including --help), 1 usage error,
// 2 input or validation failure (details on err), 3 numerical
// non-convergence.  All frequencies are printed in Hz (omega/2pi) and all
// energies in Hz (E/h); numbers carry 12 significant digits.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cqt
