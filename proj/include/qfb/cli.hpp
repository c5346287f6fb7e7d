#pragma once

// Command-line front end. `run` never calls exit(); the return value is the
// process exit code:
//   0 ok, 1 assertion / verification failure, 2 not applicable,
//   3 search exhausted, 64 usage error, 65 malformed input.

#include <iosfwd>
#include <string>
#include <vector>

namespace qfb {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int assertion = 1;
inline constexpr int not_applicable = 2;
inline constexpr int search_exhausted = 3;
inline constexpr int usage = 64;
inline constexpr int parse = 65;
}  // namespace exit_code

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

/// Whitespace split honouring '...' and "..." quoting; used by batch mode.
std::vector<std::string> split_command_line(const std::string& line);

}  // namespace qfb
