#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace algdist {

/// Exit codes of the command-line entry point.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // domain error, or a verify check that did not pass
inline constexpr int kExitUsage = 2;

/// Runs one subcommand. args[0] is the program name.
int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err);
int dispatch(int argc, const char* const* argv);

/// Lowercase hex SHA-256 of a file's contents.
std::string sha256_file(const std::string& path);

}  // namespace algdist
