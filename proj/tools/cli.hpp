#pragma once

#include <ostream>

#include "halfsphere/experiments.hpp"

namespace halfsphere {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitUnsupported = 3;
inline constexpr int kExitInvariant = 4;

// kExitInvariant iff the report lists violations.
int exit_code_for(const RunReport& report);

// Entry point of the `halfsphere` command; output goes to the given streams.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace halfsphere
