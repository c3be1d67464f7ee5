#pragma once

namespace rankload::cli {

// Exit codes: 0 ok, 1 data/IO failure, 2 usage error, 3 infeasible
// recommendation, 4 insufficient data.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitInsufficientData = 4;

int run_cli(int argc, const char* const* argv);

}  // namespace rankload::cli
