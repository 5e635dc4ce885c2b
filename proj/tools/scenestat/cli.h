#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scenestat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;  // bad flags, unreadable or malformed input
inline constexpr int kExitData = 3;   // numerical or data-level failure
inline constexpr int kExitInternal = 1;  // unexpected failure

/// Runs one invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scenestat::cli
