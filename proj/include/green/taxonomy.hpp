#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace green {

// The six error subcategories, in the order they appear in reports.
enum class ErrorSubcategory { A, B, C, D, E, F };

inline constexpr int kSubcategoryCount = 6;

constexpr std::array<ErrorSubcategory, kSubcategoryCount> all_subcategories() {
  return {ErrorSubcategory::A, ErrorSubcategory::B, ErrorSubcategory::C,
          ErrorSubcategory::D, ErrorSubcategory::E, ErrorSubcategory::F};
}

constexpr int subcategory_index(ErrorSubcategory s) {
  return static_cast<int>(s);
}

constexpr char subcategory_letter(ErrorSubcategory s) {
  return static_cast<char>('a' + subcategory_index(s));
}

std::optional<ErrorSubcategory> subcategory_from_letter(char letter);

// Canonical wording; prompts, parsers and rendered summaries all share it.
std::string_view subcategory_description(ErrorSubcategory s);

enum class Significance { significant, insignificant };

}  // namespace green
