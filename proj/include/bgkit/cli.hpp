#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bgkit {

// Exit codes: 0 success or verified, 2 violation found, 1 error.
// The report goes to `out`, a one-line human summary to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bgkit
