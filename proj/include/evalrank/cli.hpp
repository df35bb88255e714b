#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace evalrank::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUserError = 1;      // validation, configuration, usage
inline constexpr int kInternalError = 2;  // coherence failures

// Runs one command line (args exclude the program name). Results go to
// `out`; diagnostics go to `err` as "error: <Code>: <message>".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace evalrank::cli
