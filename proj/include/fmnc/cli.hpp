#pragma once

namespace fmnc {

/// Full command-line entry point. Returns the process exit code:
/// 0 success, 1 assertion failure (a suite check failed), 2 malformed
/// input or configuration.
int cli_main(int argc, const char* const* argv);

} // namespace fmnc
