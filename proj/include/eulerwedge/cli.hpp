#pragma once

namespace ew::cli {

// Full command-line front end. Returns the process exit code:
// 0 success, 1 domain error, 2 I/O or parse error.
int run_cli(int argc, const char* const* argv);

}  // namespace ew::cli
