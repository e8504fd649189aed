#pragma once

#include <iosfwd>

namespace hdmrge {

/// Entry point of the hdmrge tool. Returns the process exit code:
/// 0 success, 2 usage or parameter error, 3 data error, 4 numerical error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hdmrge
