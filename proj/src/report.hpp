#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace qsl {

// One structured document per run. The machine form has a fixed field order;
// timing is omitted from it for commands that promise byte-identical reruns.
struct Report {
  std::vector<std::string> command;
  nlohmann::ordered_json result = nlohmann::ordered_json::object();
  int exit_code = 0;  // 0 verdicts positive, 1 law failed, 2 usage/parse, 3 capped
  bool truncated = false;
  std::string text;
  bool machine_timing = true;
  long long timing_ms = 0;
};

std::string render_machine(const Report& r);
std::string render_text(const Report& r, bool with_timing);

// Parses a machine report and checks it against the documented schema;
// throws Error on malformed input.
Report parse_machine(const std::string& json_text);

}  // namespace qsl
