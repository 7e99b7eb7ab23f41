#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace enthier {

// Runs the command line interface.  `args` excludes the program name.
// Reports go to `out` (or to files given on the command line), warnings and
// JSON-formatted errors go to `err`.  Returns the process exit code:
//   0  success
//   1  a verification suite found violations
//   2  error (invalid input, bad state files, ...)
// The ENTHIER_SEED environment variable, when set, overrides any --seed.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace enthier
