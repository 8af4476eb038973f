#pragma once

#include <string>

namespace hofnet {

// Writes to a sibling temp file, then renames over the target, so readers
// never observe a half-written file.
void atomic_write_file(const std::string& path, const std::string& bytes);

std::string read_file(const std::string& path);

} // namespace hofnet
