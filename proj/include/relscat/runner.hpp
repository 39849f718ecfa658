#pragma once

#include <iosfwd>
#include <string>

#include "relscat/config.hpp"

namespace relscat {

// Executes a parsed configuration: runs the task (parallel over rays where it
// is a sweep), writes deterministic CSV artifacts, and returns the process
// exit status: 0 all pass, 1 numerical failures. Configuration errors throw
// ConfigError (exit 2 at the CLI).
int run_task(const RunConfig& cfg, std::ostream& log);

// 17 significant digits, enough to round-trip a double exactly.
std::string fmt17(double v);

}  // namespace relscat
