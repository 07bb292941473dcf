#pragma once

#include <iosfwd>

namespace c2c::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kDataError = 3,
  kInternalError = 4,
};

// Entry point shared by the executable and the tests. argv[0] is the
// program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace c2c::cli
