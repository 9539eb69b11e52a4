#pragma once

// Command-line front end. Subcommands:
//   soliton-map     one-soliton closed-form map, verified
//   verify          verification report for a map read from CSV
//   solve-beltrami  grid solve of the real Beltrami equation
//   example         wolf | half-cylinder | stw | li-tam | backlund
//   backlund        omega integrated from the built-in kink seed
//   selftest        elliptic identity suite
//
// Every leaf accepts --config FILE: a JSON object whose keys are the leaf's
// long option names. Values are applied before the command line, so flags
// override the file; unknown keys are rejected.

#include <iosfwd>
#include <string>
#include <vector>

namespace hmap::cli {

enum ExitCode : int {
  ok = 0,
  verification_failed = 1,  ///< some check above its tolerance
  usage_error = 2,          ///< bad flags, config or input files
  numeric_error = 3,        ///< domain or convergence failure while computing
};

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hmap::cli
