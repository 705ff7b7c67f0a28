#include "green/prompting.hpp"

#include <algorithm>

#include "green/errors.hpp"
#include "green/util/io.hpp"
#include "green/util/rng.hpp"
#include "green/util/sha256.hpp"
#include "green/util/text.hpp"

namespace green {

namespace {

struct TemplateSpec {
  const char* filename;
  const char* sha256;
};

// Pinned digests of the shipped assets. A mismatch means the template was
// edited without updating the parser contract review.
constexpr TemplateSpec kTemplates[] = {
    {"evaluation.txt",
     "f65d1d16c2c629a4f683d4d007b69ba54b8e2bb1743b14b1693d6cdadaaefede"},
    {"preference.txt",
     "1ba7a416d2789a6668542c4d37cf36fc6493af9211c2e998a335030a127ca9a6"},
    {"corruption_errors.txt",
     "d802ecc971a4903d07e555143478c4829ca1c6c07a1cabcfdca00a923da796c9"},
    {"corruption_rephrase.txt",
     "98f22bc6dec8cc37f74bbeac951477425bad55f45f56a3f55fcf307d7de84ca8"},
};

constexpr std::string_view kSubtleClause =
    "Aim for subtlety, adjusting only one word where feasible. ";

std::string substitute_once(std::string_view text, std::string_view token,
                            std::string_view value) {
  return util::replace_all(text, token, value);
}

}  // namespace

TemplateLibrary TemplateLibrary::load(const std::filesystem::path& dir) {
  TemplateLibrary lib;
  std::string* slots[] = {&lib.evaluation_, &lib.preference_,
                          &lib.corruption_errors_, &lib.corruption_rephrase_};
  for (size_t i = 0; i < 4; ++i) {
    auto path = dir / kTemplates[i].filename;
    std::string content = util::read_file(path);
    std::string digest = util::sha256_hex(content);
    if (digest != kTemplates[i].sha256) {
      fail(Errc::template_checksum_mismatch,
           path.string() + " has digest " + digest + ", expected " +
               kTemplates[i].sha256);
    }
    *slots[i] = std::move(content);
    lib.checksums_[kTemplates[i].filename] = digest;
  }
  return lib;
}

std::string build_eval_prompt(const TemplateLibrary& lib,
                              std::string_view reference,
                              std::string_view candidate) {
  if (util::trim(reference).empty()) {
    fail(Errc::empty_reference, "evaluation prompt needs a reference report");
  }
  std::string out =
      substitute_once(lib.evaluation(), "**Reference Report**", reference);
  return substitute_once(out, "**Candidate Report**", candidate);
}

std::string build_preference_prompt(const TemplateLibrary& lib,
                                    std::string_view reference,
                                    std::string_view candidate1,
                                    std::string_view candidate2) {
  if (util::trim(reference).empty() || util::trim(candidate1).empty() ||
      util::trim(candidate2).empty()) {
    fail(Errc::empty_report, "preference prompt needs three non-empty reports");
  }
  std::string out =
      substitute_once(lib.preference(), "**Reference Report**", reference);
  out = substitute_once(out, "**Candidate Report 1**", candidate1);
  return substitute_once(out, "**Candidate Report 2**", candidate2);
}

CorruptionSpec sample_corruption_spec(std::mt19937_64& rng) {
  CorruptionSpec spec;
  auto size = static_cast<size_t>(util::uniform_index(rng, 7));
  auto picked = util::sample_indices(rng, kSubcategoryCount, size);
  spec.error_types.reserve(picked.size());
  for (size_t idx : picked) {
    spec.error_types.push_back(static_cast<ErrorSubcategory>(idx));
  }
  spec.subtle = util::canonical_double(rng) > 0.5;
  return spec;
}

std::string join_error_descriptions(
    const std::vector<ErrorSubcategory>& types) {
  std::string out;
  for (size_t i = 0; i < types.size(); ++i) {
    if (i > 0) {
      out += (i + 1 == types.size()) ? " and " : ", ";
    }
    out += subcategory_description(types[i]);
  }
  return out;
}

std::string build_corruption_prompt(const TemplateLibrary& lib,
                                    std::string_view report,
                                    const CorruptionSpec& spec) {
  if (util::trim(report).empty()) {
    fail(Errc::empty_report, "corruption prompt needs a report");
  }
  if (spec.error_types.empty()) {
    return substitute_once(lib.corruption_rephrase(), "{report}", report);
  }
  std::string out = substitute_once(lib.corruption_errors(), "{error_types}",
                                    join_error_descriptions(spec.error_types));
  out = substitute_once(out, "{subtle_change}",
                        spec.subtle ? kSubtleClause : std::string_view{});
  return substitute_once(out, "{report}", report);
}

}  // namespace green
