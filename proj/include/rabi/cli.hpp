#pragma once

#include <ostream>

namespace rabi::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kBadArguments = 2, kIoError = 3 };

/// Entry point of the `rabi` tool. Data goes to --out or `out`, diagnostics
/// to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rabi::cli
