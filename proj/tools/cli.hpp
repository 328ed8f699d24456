#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pcm::cli {

// Exit codes: 0 success, 1 runtime failure, 2 bad arguments.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Runs one pcmtool command. args[0] is the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pcm::cli
