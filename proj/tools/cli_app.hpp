#pragma once

namespace hbell::cli {

/// Exit codes: 0 success, 1 computational error, 2 usage error.
int run_cli(int argc, const char* const* argv);

}  // namespace hbell::cli
