#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace orbitfol {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

/// Runs one command line (without the program name). Subcommands: check,
/// closure, classify, orbit, flow, stratify, verify. Returns 0 on success,
/// 1 on failed checks or domain errors, 2 on usage errors and 3 on I/O or
/// scenario-file errors.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace orbitfol
