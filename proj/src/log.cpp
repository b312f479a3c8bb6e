#include "rap/log.hpp"

#include <cstdlib>
#include <iostream>

#include <nlohmann/json.hpp>

namespace rap {

LogLevel log_level() {
  static LogLevel level = [] {
    const char *env = std::getenv("RAP_LOG");
    std::string v = env ? env : "";
    if (v == "debug")
      return LogLevel::debug;
    if (v == "warn")
      return LogLevel::warn;
    if (v == "error")
      return LogLevel::error;
    return LogLevel::info;
  }();
  return level;
}

void log_event(LogLevel level, const std::string &event,
               const std::vector<std::pair<std::string, std::string>> &fields) {
  if (level < log_level())
    return;
  static const char *names[] = {"debug", "info", "warn", "error"};
  nlohmann::json obj;
  obj["level"] = names[static_cast<int>(level)];
  obj["event"] = event;
  for (const auto &[k, v] : fields)
    obj[k] = v;
  std::cerr << obj.dump() << "\n";
}

} // namespace rap
