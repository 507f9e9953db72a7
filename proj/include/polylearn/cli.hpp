#pragma once

#include "polylearn/point_matrix.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace polylearn::cli {

inline constexpr const char* kToolName = "polylearn";
inline constexpr const char* kVersion = "0.1.0";

/// Exit codes. Hypothesis warnings never change the exit code.
enum ExitCode : int {
    kOk = 0,
    kFailure = 1,        ///< I/O or other runtime failure
    kPrecondition = 2,   ///< invalid argument or violated precondition
    kStageFailure = 3,   ///< a pipeline stage could not complete
};

/// Parses "c=..,cprime=..,c0=.." (any subset, any order) over the defaults.
TheoryConstants parse_constants(const std::string& spec);

/// Runs the command line `args` (args[0] is the program name). Reports and
/// diagnostics go to `out` and `err`; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polylearn::cli
