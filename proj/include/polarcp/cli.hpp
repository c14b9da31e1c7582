#pragma once

namespace polarcp {

// Entry point of the command line tool. Returns the process exit code:
// 0 on success, 1 on bad input (flags, config values, malformed files),
// 2 on I/O failure.
int run_cli(int argc, const char* const* argv);

}  // namespace polarcp
