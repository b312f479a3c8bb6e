#pragma once

#include <string>
#include <vector>

namespace rap {

// Reads a whole UTF-8 file split into lines ('\n', trailing '\r' stripped).
// Throws IoError if the file cannot be opened.
std::vector<std::string> read_lines(const std::string &path);

// Writes content to path via write-temp-rename so a crashed run never
// leaves a partially written file behind. Throws IoError on failure.
void write_atomic(const std::string &path, const std::string &content);

} // namespace rap
