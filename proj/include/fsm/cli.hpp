#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fsm {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { exit_pass = 0, exit_fail = 1, exit_config = 2, exit_nonconvergence = 3 };

// Parses argv-style arguments (without the program name) and runs the selected suites.
// Writes report.json, timings.json and the CSV tables into --out.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fsm
