#pragma once

#include <ostream>

namespace jumpset {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitVerificationFailed = 1,
    kExitUsage = 2,
    kExitDataError = 3,
};

/// Entry point of the `jumpset` tool:
///   gen NAME|SPEC.json...   write corpus grids and ground-truth sidecars
///   classify GRID           classification JSON and PGM class map
///   esets GRID              one E-set JSON per non-empty (r0, delta, B)
///   verify ESET             cone violations beyond the guard (exit 1 if any)
///   cover ESET              Lipschitz-graph cover (exit 1 if a cell fails)
///   report GRID             classify, extract, verify and cover in one pass
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace jumpset
