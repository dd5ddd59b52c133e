#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace tdm {

/// Whole-file read; throws InputError when the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

} // namespace tdm
