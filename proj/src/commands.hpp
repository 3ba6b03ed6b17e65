#pragma once

#include <string>
#include <vector>

#include "report.hpp"

namespace qsl {

struct RunResult {
  Report report;
  std::string output;  // rendered in the requested format
};

// Dispatches one CLI invocation. Never throws; every failure is folded into
// the report and its exit code (0 ok, 1 law failed, 2 usage/parse, 3 capped).
RunResult run_command(const std::vector<std::string>& argv);

}  // namespace qsl
