#pragma once

namespace hamstab::cli {

/// Entry point of the command-line harness. Returns the process exit code:
/// 0 success, 2 configuration error, 3 numerical failure.
int run(int argc, const char* const* argv);

}  // namespace hamstab::cli
