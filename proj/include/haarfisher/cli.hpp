#pragma once

#include <exception>
#include <iosfwd>
#include <string>
#include <vector>

namespace haarfisher::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // failed check or degenerate family
inline constexpr int kExitUsage = 2;

/// Entry point of the `haarfisher` tool. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Prints an error and maps it to an exit status (usage errors give 2).
int report_error(std::exception_ptr error, std::ostream& err);

}  // namespace haarfisher::cli
