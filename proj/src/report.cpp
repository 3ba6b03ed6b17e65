#include "report.hpp"

#include <sstream>

#include "errors.hpp"

namespace qsl {

std::string render_machine(const Report& r) {
  nlohmann::ordered_json j;
  j["tool"] = "qsl";
  j["schema"] = 1;
  j["command"] = r.command;
  j["exit_code"] = r.exit_code;
  j["truncated"] = r.truncated;
  j["result"] = r.result;
  if (r.machine_timing) j["timing_ms"] = r.timing_ms;
  return j.dump(2) + "\n";
}

std::string render_text(const Report& r, bool with_timing) {
  std::ostringstream os;
  os << "qsl";
  for (const auto& c : r.command) os << ' ' << c;
  os << "\n" << r.text;
  if (r.truncated) os << "note: enumeration capped, verdicts are partial\n";
  if (with_timing) os << "elapsed: " << r.timing_ms << " ms\n";
  os << "exit: " << r.exit_code << "\n";
  return os.str();
}

Report parse_machine(const std::string& json_text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(json_text);
  } catch (const std::exception& e) {
    throw Error(ErrKind::SyntaxError, std::string("machine report is not valid JSON: ") +
                                          e.what());
  }
  auto need = [&](const char* key) {
    if (!j.contains(key))
      throw Error(ErrKind::SyntaxError, std::string("machine report lacks field: ") + key);
  };
  need("tool");
  need("schema");
  need("command");
  need("exit_code");
  need("truncated");
  need("result");
  if (j["tool"] != "qsl")
    throw Error(ErrKind::SyntaxError, "machine report tool field mismatch");
  if (!j["schema"].is_number_integer() || j["schema"].get<int>() != 1)
    throw Error(ErrKind::SyntaxError, "unsupported machine report schema");
  if (!j["command"].is_array() || !j["exit_code"].is_number_integer() ||
      !j["truncated"].is_boolean() || !j["result"].is_object())
    throw Error(ErrKind::SyntaxError, "machine report field has the wrong type");

  Report r;
  for (const auto& c : j["command"]) {
    if (!c.is_string())
      throw Error(ErrKind::SyntaxError, "command echo entries must be strings");
    r.command.push_back(c.get<std::string>());
  }
  r.exit_code = j["exit_code"].get<int>();
  r.truncated = j["truncated"].get<bool>();
  r.result = j["result"];
  if (j.contains("timing_ms")) {
    if (!j["timing_ms"].is_number_integer())
      throw Error(ErrKind::SyntaxError, "timing_ms must be an integer");
    r.timing_ms = j["timing_ms"].get<long long>();
  } else {
    r.machine_timing = false;
  }
  return r;
}

}  // namespace qsl
