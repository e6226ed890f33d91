#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace mosc {

// Writes content to a sibling temporary file, then renames it over path.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

// Shortest representation that round-trips through strtod.
std::string format_double(double v);

}  // namespace mosc
