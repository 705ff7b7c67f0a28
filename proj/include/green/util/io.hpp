#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace green::util {

std::string read_file(const std::filesystem::path& path);

void write_file(const std::filesystem::path& path, std::string_view content);

// Write to a sibling temp file, then rename. Readers never observe a torn
// file; concurrent writers of identical content are harmless.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

// RFC 4180 rows: quoted fields may contain commas, quotes ("" escape) and
// newlines. Empty trailing line ignored. CRLF and LF both accepted.
std::vector<std::vector<std::string>> read_csv(
    const std::filesystem::path& path);

std::vector<std::vector<std::string>> parse_csv(std::string_view text);

}  // namespace green::util
