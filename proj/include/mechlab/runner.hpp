#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "mechlab/config.hpp"

namespace mechlab {

// Exit codes shared by the subcommands: 0 success, 2 config error,
// 3 verification or construction failure.  Results go to `out_override`
// when nonempty, else to the config's `out` path, else to stdout.
// Diagnostics always go to `diag`.

// Convergence experiment: verifies the configured mechanism, then writes one
// CSV row per requested resolution.
int run_approximate(const ExperimentConfig& config, const std::string& out_override,
                    std::ostream& diag);

// Verification report: violation counts and up to 32 witnesses for the
// strategy-proofness, participation, and monotonicity checks.
int run_verify(const ExperimentConfig& config, const std::string& out_override,
               std::ostream& diag);

// Menu optimization: one CSV row per menu size up to m_max, plus a final
// comparison row with the configured mechanism's revenue when one is set.
// The seed only shuffles optimizer restart points.
int run_optimize(const ExperimentConfig& config, const std::string& out_override,
                 std::uint64_t seed, std::ostream& diag);

}  // namespace mechlab
