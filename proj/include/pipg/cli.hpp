#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pipg::cli {

// Exit codes.
constexpr int kOk = 0;            // success, Same, Ok, true
constexpr int kNegative = 1;      // Differ, violation, false
constexpr int kUsage = 2;         // bad flags or unreadable input
constexpr int kInconclusive = 3;  // budget exhausted

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pipg::cli
