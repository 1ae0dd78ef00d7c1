#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace alo::io {

// Writes through a sibling ".tmp" file and renames it into place, so a
// reader never sees half a file. Throws Error{IoFailure}.
void write_file(const std::filesystem::path& path, const std::string& content);

// nullopt when the file cannot be opened.
std::optional<std::string> read_file(const std::filesystem::path& path);

}  // namespace alo::io
