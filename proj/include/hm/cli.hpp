#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hm::cli {

// Exit codes of `run`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Entry point of the `hm` binary. `args` excludes the program name. Data goes
// to `out` (or files); diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace hm::cli
