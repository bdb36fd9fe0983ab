#pragma once

#include <iosfwd>
#include <string>

namespace tri::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failed = 1;
inline constexpr int exit_usage = 2;

/// Runs the tri command line. Output goes to `out` unless --out is given.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// 17 significant digits, shortest general form; parses back exactly.
std::string format_double(double v);

}  // namespace tri::cli
