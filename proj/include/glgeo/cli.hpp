#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace glgeo::cli {

/// Process exit codes of the glgeo tool.
enum ExitCode : int {
  kOk = 0,
  kUpperBoundOnly = 2,  // dist: no start converged; verify: residual above threshold
  kInfinite = 3,        // dist: endpoints in different components of GL(n)
  kUsage = 64,          // malformed flags, matrix JSON or curve file
  kDataError = 65,      // singular input or determinant of the wrong sign
  kSoftware = 70,       // numerical failure inside a solver
};

/// Runs one glgeo command. `args` excludes the program name; reports go to
/// `out` (or the --out file) and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace glgeo::cli
