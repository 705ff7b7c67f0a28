#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "green/taxonomy.hpp"

namespace green {

struct SubcategoryFinding {
  // count is authoritative for scoring; explanations feed summarization.
  // Models sometimes merge sentences, so no length relation is enforced.
  int count = 0;
  std::vector<std::string> explanations;

  bool operator==(const SubcategoryFinding&) const = default;
};

struct GreenAnalysis {
  std::string explanation;
  std::array<SubcategoryFinding, kSubcategoryCount> sig;
  std::array<SubcategoryFinding, kSubcategoryCount> insig;
  int matched_count = 0;
  std::vector<std::string> matched_findings;
  std::string raw;

  const SubcategoryFinding& sig_for(ErrorSubcategory s) const {
    return sig[subcategory_index(s)];
  }
  const SubcategoryFinding& insig_for(ErrorSubcategory s) const {
    return insig[subcategory_index(s)];
  }
};

enum class PreferenceLabel { first_better, second_better, equal };

// Pattern extraction over the evaluation response format. Sections located
// case-insensitively; lines starting with ``` are ignored; subcategory lines
// absent inside a present section parse as count 0.
// Throws Error(missing_section) / Error(unparsable_count).
GreenAnalysis parse_green_analysis(std::string_view raw);

// Emits the response format; parse(render(a)) preserves counts, explanations
// and matched findings.
std::string render_green_analysis(const GreenAnalysis& analysis);

// Scans lines last to first for one of the three exact label phrases.
// Throws Error(no_label_found).
PreferenceLabel parse_preference(std::string_view raw);

std::string_view preference_label_phrase(PreferenceLabel label);

// Section boundaries for debugging failed parses: offset into the cleaned
// text, or -1 when the header is absent.
struct SectionOffsets {
  long explanation = -1;
  long significant = -1;
  long insignificant = -1;
  long matched = -1;
};

SectionOffsets locate_sections(std::string_view raw);

}  // namespace green
