#include "green/scoring.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

#include "green/errors.hpp"
#include "green/util/io.hpp"
#include "green/util/text.hpp"

namespace green {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json section_to_json(
    const std::array<SubcategoryFinding, kSubcategoryCount>& section) {
  ordered_json out;
  for (auto subcat : all_subcategories()) {
    const auto& finding = section[subcategory_index(subcat)];
    ordered_json entry;
    entry["count"] = finding.count;
    entry["explanations"] = finding.explanations;
    out[std::string(1, subcategory_letter(subcat))] = std::move(entry);
  }
  return out;
}

std::array<SubcategoryFinding, kSubcategoryCount> section_from_json(
    const json& node) {
  std::array<SubcategoryFinding, kSubcategoryCount> section;
  for (auto subcat : all_subcategories()) {
    const auto& entry = node.at(std::string(1, subcategory_letter(subcat)));
    auto& slot = section[subcategory_index(subcat)];
    slot.count = entry.at("count").get<int>();
    slot.explanations = entry.at("explanations").get<std::vector<std::string>>();
  }
  return section;
}

}  // namespace

double green_score(const GreenAnalysis& analysis) {
  if (analysis.matched_count <= 0) return 0.0;
  int sig = significant_error_count(analysis);
  return static_cast<double>(analysis.matched_count) /
         static_cast<double>(analysis.matched_count + sig);
}

int significant_error_count(const GreenAnalysis& analysis) {
  int total = 0;
  for (const auto& finding : analysis.sig) total += finding.count;
  return total;
}

int total_error_count(const GreenAnalysis& analysis) {
  int total = significant_error_count(analysis);
  for (const auto& finding : analysis.insig) total += finding.count;
  return total;
}

GreenResult make_result(std::string pair_id, GreenAnalysis analysis,
                        std::string fingerprint) {
  GreenResult result;
  result.pair_id = std::move(pair_id);
  result.score = green_score(analysis);
  result.analysis = std::move(analysis);
  result.fingerprint = std::move(fingerprint);
  return result;
}

ScoreAggregate aggregate(const std::vector<GreenResult>& results,
                         int parse_failures) {
  if (results.empty()) fail(Errc::empty_input, "no results to aggregate");
  ScoreAggregate agg;
  agg.n = static_cast<int>(results.size());
  agg.parse_failures = parse_failures;
  double sum = 0.0;
  for (const auto& r : results) sum += r.score;
  agg.mean = sum / agg.n;
  double ss = 0.0;
  for (const auto& r : results) {
    double d = r.score - agg.mean;
    ss += d * d;
  }
  agg.std_population = std::sqrt(ss / agg.n);
  agg.std_sample = agg.n > 1 ? std::sqrt(ss / (agg.n - 1)) : 0.0;
  return agg;
}

std::string results_to_jsonl(const std::vector<GreenResult>& results) {
  std::string out;
  for (const auto& result : results) {
    ordered_json record;
    record["pair_id"] = result.pair_id;
    record["score"] = result.score;
    record["matched_count"] = result.analysis.matched_count;
    record["sig"] = section_to_json(result.analysis.sig);
    record["insig"] = section_to_json(result.analysis.insig);
    record["matched_findings"] = result.analysis.matched_findings;
    record["explanation"] = result.analysis.explanation;
    record["fingerprint"] = result.fingerprint;
    out += record.dump();
    out += '\n';
  }
  return out;
}

void write_results(const std::vector<GreenResult>& results,
                   const std::filesystem::path& path) {
  util::write_file(path, results_to_jsonl(results));
}

std::vector<GreenResult> load_results(const std::filesystem::path& path) {
  std::vector<GreenResult> results;
  auto lines = util::split_lines(util::read_file(path));
  for (size_t i = 0; i < lines.size(); ++i) {
    if (util::trim(lines[i]).empty()) continue;
    json record = json::parse(lines[i], nullptr, false);
    if (record.is_discarded() || !record.is_object()) {
      fail(Errc::malformed_record,
           path.string() + ":" + std::to_string(i + 1));
    }
    GreenResult result;
    try {
      result.pair_id = record.at("pair_id").get<std::string>();
      result.score = record.at("score").get<double>();
      result.analysis.matched_count = record.at("matched_count").get<int>();
      result.analysis.sig = section_from_json(record.at("sig"));
      result.analysis.insig = section_from_json(record.at("insig"));
      result.analysis.matched_findings =
          record.at("matched_findings").get<std::vector<std::string>>();
      result.analysis.explanation =
          record.value("explanation", std::string{});
      result.fingerprint = record.value("fingerprint", std::string{});
    } catch (const json::exception& e) {
      fail(Errc::malformed_record,
           path.string() + ":" + std::to_string(i + 1) + ": " + e.what());
    }
    results.push_back(std::move(result));
  }
  return results;
}

}  // namespace green
