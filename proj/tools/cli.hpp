#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kbo::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kNo = 1;
inline constexpr int kInputError = 2;
inline constexpr int kResourceLimit = 3;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kbo::cli
