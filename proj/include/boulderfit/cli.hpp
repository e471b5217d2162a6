#pragma once

#include <iosfwd>
#include <vector>
#include <string>

namespace boulderfit::cli {

// Exit codes: 0 success, 1 runtime/data error, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace boulderfit::cli
