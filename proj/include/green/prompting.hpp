#pragma once

#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "green/taxonomy.hpp"

namespace green {

// Prompt texts live as repository assets, never inline in code: the analysis
// parser's grammar is coupled to the response-format block, so edits must be
// deliberate. Checksums catch accidental ones at load time.
class TemplateLibrary {
 public:
  static TemplateLibrary load(const std::filesystem::path& dir);

  const std::string& evaluation() const { return evaluation_; }
  const std::string& preference() const { return preference_; }
  const std::string& corruption_errors() const { return corruption_errors_; }
  const std::string& corruption_rephrase() const {
    return corruption_rephrase_;
  }

  // filename -> sha256, for run manifests.
  const std::map<std::string, std::string>& checksums() const {
    return checksums_;
  }

 private:
  std::string evaluation_;
  std::string preference_;
  std::string corruption_errors_;
  std::string corruption_rephrase_;
  std::map<std::string, std::string> checksums_;
};

struct CorruptionSpec {
  std::vector<ErrorSubcategory> error_types;  // empty = rephrase mode
  bool subtle = false;
};

std::string build_eval_prompt(const TemplateLibrary& lib,
                              std::string_view reference,
                              std::string_view candidate);

std::string build_preference_prompt(const TemplateLibrary& lib,
                                    std::string_view reference,
                                    std::string_view candidate1,
                                    std::string_view candidate2);

// Size uniform over 0..6, then that many distinct subcategories; subtle with
// probability 1/2.
CorruptionSpec sample_corruption_spec(std::mt19937_64& rng);

std::string build_corruption_prompt(const TemplateLibrary& lib,
                                    std::string_view report,
                                    const CorruptionSpec& spec);

// Canonical descriptions joined with ", " and a final " and ".
std::string join_error_descriptions(
    const std::vector<ErrorSubcategory>& types);

}  // namespace green
