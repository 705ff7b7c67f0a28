#include "green/analysis.hpp"

#include <algorithm>
#include <optional>

#include "green/errors.hpp"
#include "green/util/text.hpp"

namespace green {

namespace {

constexpr std::string_view kSectionNames[4] = {
    "[Explanation]", "[Clinically Significant Errors]",
    "[Clinically Insignificant Errors]", "[Matched Findings]"};

// Drops code-fence lines so fenced responses parse like bare ones.
std::string strip_fences(std::string_view raw) {
  std::vector<std::string> kept;
  for (auto& line : util::split_lines(raw)) {
    if (util::trim(line).substr(0, 3) == "```") continue;
    kept.push_back(std::move(line));
  }
  return util::join(kept, "\n");
}

struct Section {
  size_t header_pos;   // offset of '[' in the cleaned text
  size_t content_pos;  // first char after the header and optional ':'
  int which;           // index into kSectionNames
};

std::vector<Section> find_sections(const std::string& cleaned,
                                   bool require_all) {
  std::string lowered = util::to_lower(cleaned);
  std::vector<Section> sections;
  for (int which = 0; which < 4; ++which) {
    std::string needle = util::to_lower(kSectionNames[which]);
    size_t pos = lowered.find(needle);
    if (pos == std::string::npos) {
      if (require_all) {
        fail(Errc::missing_section, std::string(kSectionNames[which]));
      }
      continue;
    }
    size_t after = pos + needle.size();
    if (after < cleaned.size() && cleaned[after] == ':') ++after;
    sections.push_back({pos, after, which});
  }
  std::sort(sections.begin(), sections.end(),
            [](const Section& a, const Section& b) {
              return a.header_pos < b.header_pos;
            });
  return sections;
}

// Lines of one entry joined on single spaces, outer whitespace trimmed.
std::string join_entry(const std::vector<std::string>& lines) {
  std::vector<std::string> trimmed;
  for (const auto& line : lines) {
    auto t = util::trim(line);
    if (!t.empty()) trimmed.emplace_back(t);
  }
  return util::join(trimmed, " ");
}

// "<n>" or "<n>." prefix; the remainder is the sentence blob.
std::optional<std::pair<int, std::string>> split_count(std::string_view text) {
  size_t i = 0;
  while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
  if (i == 0) return std::nullopt;
  int count = 0;
  for (size_t j = 0; j < i; ++j) {
    count = count * 10 + (text[j] - '0');
    if (count > 1000000) return std::nullopt;  // absurd count = garbage
  }
  std::string_view rest = text.substr(i);
  if (!rest.empty() && rest[0] == '.') rest.remove_prefix(1);
  return std::make_pair(count, std::string(util::trim(rest)));
}

// One terminal period stripped from the blob, then ';'-separated sentences.
std::vector<std::string> split_sentence_blob(std::string_view blob) {
  auto trimmed = util::trim(blob);
  if (!trimmed.empty() && trimmed.back() == '.') {
    trimmed.remove_suffix(1);
  }
  std::vector<std::string> out;
  for (const auto& piece : util::split(trimmed, ';')) {
    auto t = util::trim(piece);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

std::array<SubcategoryFinding, kSubcategoryCount> parse_error_section(
    std::string_view content, std::string_view section_name) {
  std::array<SubcategoryFinding, kSubcategoryCount> findings;
  auto lines = util::split_lines(content);
  std::optional<ErrorSubcategory> current;
  std::vector<std::string> entry_lines;
  auto flush = [&] {
    if (!current) {
      entry_lines.clear();
      return;
    }
    std::string entry = join_entry(entry_lines);
    entry_lines.clear();
    // entry looks like "(x) <description>: <n>. <sentences>"
    size_t colon = entry.find(':');
    if (colon == std::string::npos) {
      fail(Errc::unparsable_count,
           std::string(1, subcategory_letter(*current)) + " in " +
               std::string(section_name) + ": no count after description");
    }
    auto counted = split_count(util::trim(entry.substr(colon + 1)));
    if (!counted) {
      fail(Errc::unparsable_count,
           std::string(1, subcategory_letter(*current)) + " in " +
               std::string(section_name));
    }
    auto& slot = findings[subcategory_index(*current)];
    slot.count = counted->first;
    slot.explanations = split_sentence_blob(counted->second);
    current.reset();
  };
  for (const auto& line : lines) {
    auto t = util::trim(line);
    // A new entry starts at "(x)" with x in a..f.
    if (t.size() >= 3 && t[0] == '(' && t[2] == ')') {
      if (auto subcat = subcategory_from_letter(t[1])) {
        flush();
        current = *subcat;
        entry_lines.emplace_back(t.substr(3));
        continue;
      }
    }
    if (current) entry_lines.emplace_back(t);
  }
  flush();
  return findings;
}

}  // namespace

GreenAnalysis parse_green_analysis(std::string_view raw) {
  GreenAnalysis analysis;
  analysis.raw = std::string(raw);
  std::string cleaned = strip_fences(raw);
  auto sections = find_sections(cleaned, /*require_all=*/true);

  std::array<std::string, 4> content;
  for (size_t i = 0; i < sections.size(); ++i) {
    size_t end =
        (i + 1 < sections.size()) ? sections[i + 1].header_pos : cleaned.size();
    content[sections[i].which] =
        cleaned.substr(sections[i].content_pos, end - sections[i].content_pos);
  }

  analysis.explanation = std::string(util::trim(content[0]));
  analysis.sig = parse_error_section(content[1], kSectionNames[1]);
  analysis.insig = parse_error_section(content[2], kSectionNames[2]);

  std::string matched_blob = join_entry(util::split_lines(content[3]));
  auto counted = split_count(matched_blob);
  if (!counted) {
    fail(Errc::unparsable_count, "[Matched Findings]");
  }
  analysis.matched_count = counted->first;
  analysis.matched_findings = split_sentence_blob(counted->second);
  return analysis;
}

std::string render_green_analysis(const GreenAnalysis& analysis) {
  std::string out;
  out += "[Explanation]:\n";
  out += analysis.explanation;
  out += "\n\n[Clinically Significant Errors]:\n";
  auto render_section =
      [&out](const std::array<SubcategoryFinding, kSubcategoryCount>& section) {
        for (auto subcat : all_subcategories()) {
          const auto& finding = section[subcategory_index(subcat)];
          out += "(";
          out += subcategory_letter(subcat);
          out += ") ";
          out += subcategory_description(subcat);
          out += ": ";
          out += std::to_string(finding.count);
          out += ".";
          if (!finding.explanations.empty()) {
            out += " ";
            out += util::join(finding.explanations, "; ");
            out += ".";
          }
          out += "\n";
        }
      };
  render_section(analysis.sig);
  out += "\n[Clinically Insignificant Errors]:\n";
  render_section(analysis.insig);
  out += "\n[Matched Findings]:\n";
  out += std::to_string(analysis.matched_count);
  out += ".";
  if (!analysis.matched_findings.empty()) {
    out += " ";
    out += util::join(analysis.matched_findings, "; ");
    out += ".";
  }
  out += "\n";
  return out;
}

std::string_view preference_label_phrase(PreferenceLabel label) {
  switch (label) {
    case PreferenceLabel::first_better:
      return "Assistant 1 is better than Assistant 2";
    case PreferenceLabel::second_better:
      return "Assistant 1 is worse than Assistant 2";
    case PreferenceLabel::equal:
      return "Assistant 1 is equal to Assistant 2";
  }
  return "";
}

PreferenceLabel parse_preference(std::string_view raw) {
  auto lines = util::split_lines(raw);
  for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
    for (auto label :
         {PreferenceLabel::first_better, PreferenceLabel::second_better,
          PreferenceLabel::equal}) {
      if (it->find(preference_label_phrase(label)) != std::string::npos) {
        return label;
      }
    }
  }
  fail(Errc::no_label_found, "no preference label in response");
}

SectionOffsets locate_sections(std::string_view raw) {
  std::string cleaned = strip_fences(raw);
  SectionOffsets offsets;
  long* slots[4] = {&offsets.explanation, &offsets.significant,
                    &offsets.insignificant, &offsets.matched};
  for (const auto& section : find_sections(cleaned, /*require_all=*/false)) {
    *slots[section.which] = static_cast<long>(section.header_pos);
  }
  return offsets;
}

}  // namespace green
