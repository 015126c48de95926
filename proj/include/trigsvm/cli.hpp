#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trigsvm::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;

/// Runs one command line (without the program name). Human-readable output
/// goes to `out`, a single-line diagnostic to `err` on failure.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trigsvm::cli
