#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace green::util {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);

// Splits on '\n'; a trailing newline does not produce an empty final line.
// '\r' before a split point is stripped so CRLF input behaves like LF.
std::vector<std::string> split_lines(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);

// Every occurrence, left to right, non-overlapping.
std::string replace_all(std::string_view text, std::string_view needle,
                        std::string_view replacement);

// Lowercased runs of [A-Za-z0-9]; any other byte separates tokens. Bytes
// >= 0x80 count as word bytes so non-ASCII text does not vanish.
std::vector<std::string> word_tokens(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace green::util
