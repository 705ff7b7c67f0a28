#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "green/taxonomy.hpp"

namespace green {

struct ReportPair {
  std::string id;
  std::string reference;  // never empty after load
  std::string candidate;  // may be empty (degenerate generation output)
  std::string source;     // optional heuristic/dataset label
};

struct ExpertAnnotation {
  std::string rater_id;
  std::string pair_id;
  std::array<int, kSubcategoryCount> sig_counts{};
  std::array<int, kSubcategoryCount> insig_counts{};
};

inline int significant_total(const ExpertAnnotation& a) {
  int total = 0;
  for (int c : a.sig_counts) total += c;
  return total;
}

inline int total_errors(const ExpertAnnotation& a) {
  int total = significant_total(a);
  for (int c : a.insig_counts) total += c;
  return total;
}

enum class Choice { candidate1, candidate2 };

struct PreferenceRecord {
  std::string rater_id;
  std::string case_id;
  Choice chosen = Choice::candidate1;
  int confidence = 1;  // 1..10
};

struct PreferenceSet {
  std::vector<PreferenceRecord> records;
  // Case ids in first-appearance order where all raters chose alike.
  std::vector<std::string> concordant_cases;
  // Case ids where raters conflict; callers drop these before accuracy work.
  std::vector<std::string> discordant_cases;
};

enum class PairFormat { jsonl, csv };

PairFormat pair_format_for(const std::filesystem::path& path);

std::vector<ReportPair> load_pairs(const std::filesystem::path& path,
                                   PairFormat format);

// Canonical form: one JSON object per line, keys id/reference/candidate and
// source only when non-empty, LF endings. write(load(f)) == f for normalized
// input.
std::string normalized_pairs_text(const std::vector<ReportPair>& pairs);
void write_pairs(const std::vector<ReportPair>& pairs,
                 const std::filesystem::path& path);

std::vector<ExpertAnnotation> load_expert_annotations(
    const std::filesystem::path& path);

PreferenceSet load_preferences(const std::filesystem::path& path);

}  // namespace green
