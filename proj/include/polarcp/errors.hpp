#pragma once

#include <stdexcept>

namespace polarcp {

// Bad user input: malformed config values, inconsistent sizes, unparseable
// rows. The CLI maps this to exit code 1.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem trouble: missing files, unwritable outputs. Exit code 2.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace polarcp
