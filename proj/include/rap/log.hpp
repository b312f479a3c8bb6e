#pragma once

#include <string>
#include <utility>
#include <vector>

namespace rap {

enum class LogLevel { debug = 0, info = 1, warn = 2, error = 3 };

// Level comes from the RAP_LOG env var (debug|info|warn|error), read once.
// Unset or unrecognized means info.
LogLevel log_level();

// Emits one JSON object per event on stderr:
//   {"level":"info","event":"...","k":"v",...}
void log_event(LogLevel level, const std::string &event,
               const std::vector<std::pair<std::string, std::string>> &fields = {});

} // namespace rap
