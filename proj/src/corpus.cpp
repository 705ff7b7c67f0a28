#include "green/corpus.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "green/errors.hpp"
#include "green/util/io.hpp"
#include "green/util/text.hpp"

namespace green {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void malformed(const std::filesystem::path& path, size_t line,
                            const std::string& what) {
  fail(Errc::malformed_record,
       path.string() + ":" + std::to_string(line) + ": " + what);
}

std::string require_string(const json& record, const char* key,
                           const std::filesystem::path& path, size_t line) {
  auto it = record.find(key);
  if (it == record.end() || !it->is_string()) {
    malformed(path, line, std::string("missing or non-string field '") + key +
                              "'");
  }
  return it->get<std::string>();
}

void check_pair(ReportPair& pair, std::set<std::string>& seen,
                const std::filesystem::path& path, size_t line) {
  if (pair.id.empty()) malformed(path, line, "empty id");
  if (pair.reference.empty()) malformed(path, line, "empty reference");
  if (!seen.insert(pair.id).second) {
    fail(Errc::duplicate_id, pair.id);
  }
}

std::vector<ReportPair> load_pairs_jsonl(const std::filesystem::path& path) {
  std::vector<ReportPair> pairs;
  std::set<std::string> seen;
  auto lines = util::split_lines(util::read_file(path));
  for (size_t i = 0; i < lines.size(); ++i) {
    if (util::trim(lines[i]).empty()) continue;
    json record = json::parse(lines[i], nullptr, false);
    if (record.is_discarded() || !record.is_object()) {
      malformed(path, i + 1, "not a JSON object");
    }
    ReportPair pair;
    pair.id = require_string(record, "id", path, i + 1);
    pair.reference = require_string(record, "reference", path, i + 1);
    pair.candidate = require_string(record, "candidate", path, i + 1);
    if (record.contains("source")) {
      pair.source = require_string(record, "source", path, i + 1);
    }
    check_pair(pair, seen, path, i + 1);
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<ReportPair> load_pairs_csv(const std::filesystem::path& path) {
  auto rows = util::read_csv(path);
  if (rows.empty()) return {};
  std::unordered_map<std::string, size_t> columns;
  for (size_t c = 0; c < rows[0].size(); ++c) columns[rows[0][c]] = c;
  for (const char* key : {"id", "reference", "candidate"}) {
    if (!columns.count(key)) {
      malformed(path, 1, std::string("missing column '") + key + "'");
    }
  }
  std::vector<ReportPair> pairs;
  std::set<std::string> seen;
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    auto cell = [&](const char* key) -> std::string {
      auto it = columns.find(key);
      if (it == columns.end() || it->second >= row.size()) return {};
      return row[it->second];
    };
    if (row.size() < 3) malformed(path, r + 1, "too few fields");
    ReportPair pair{cell("id"), cell("reference"), cell("candidate"),
                    cell("source")};
    check_pair(pair, seen, path, r + 1);
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

int parse_count(const std::string& cell, const std::filesystem::path& path,
                size_t line) {
  std::string trimmed(util::trim(cell));
  if (trimmed.empty()) malformed(path, line, "empty count");
  size_t pos = 0;
  long value = 0;
  try {
    value = std::stol(trimmed, &pos);
  } catch (const std::exception&) {
    malformed(path, line, "non-numeric count '" + trimmed + "'");
  }
  if (pos != trimmed.size()) {
    malformed(path, line, "non-numeric count '" + trimmed + "'");
  }
  if (value < 0) fail(Errc::negative_count, trimmed + " at " + path.string() +
                                                ":" + std::to_string(line));
  return static_cast<int>(value);
}

}  // namespace

PairFormat pair_format_for(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? PairFormat::csv : PairFormat::jsonl;
}

std::vector<ReportPair> load_pairs(const std::filesystem::path& path,
                                   PairFormat format) {
  return format == PairFormat::jsonl ? load_pairs_jsonl(path)
                                     : load_pairs_csv(path);
}

std::string normalized_pairs_text(const std::vector<ReportPair>& pairs) {
  std::string out;
  for (const auto& pair : pairs) {
    ordered_json record;
    record["id"] = pair.id;
    record["reference"] = pair.reference;
    record["candidate"] = pair.candidate;
    if (!pair.source.empty()) record["source"] = pair.source;
    out += record.dump();
    out += '\n';
  }
  return out;
}

void write_pairs(const std::vector<ReportPair>& pairs,
                 const std::filesystem::path& path) {
  util::write_file(path, normalized_pairs_text(pairs));
}

std::vector<ExpertAnnotation> load_expert_annotations(
    const std::filesystem::path& path) {
  auto rows = util::read_csv(path);
  if (rows.empty()) fail(Errc::malformed_record, path.string() + ": empty");
  std::unordered_map<std::string, size_t> columns;
  for (size_t c = 0; c < rows[0].size(); ++c) columns[rows[0][c]] = c;
  std::vector<std::string> wanted = {"rater_id", "pair_id"};
  for (char prefix : {'s', 'i'}) {
    for (auto subcat : all_subcategories()) {
      wanted.push_back(std::string(prefix == 's' ? "sig_" : "insig_") +
                       subcategory_letter(subcat));
    }
  }
  for (const auto& key : wanted) {
    if (!columns.count(key)) {
      malformed(path, 1, "missing column '" + key + "'");
    }
  }
  std::vector<ExpertAnnotation> annotations;
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    auto cell = [&](const std::string& key) -> const std::string& {
      size_t c = columns.at(key);
      if (c >= row.size()) malformed(path, r + 1, "too few fields");
      return row[c];
    };
    ExpertAnnotation a;
    a.rater_id = cell("rater_id");
    a.pair_id = cell("pair_id");
    if (a.rater_id.empty() || a.pair_id.empty()) {
      malformed(path, r + 1, "empty rater_id or pair_id");
    }
    for (auto subcat : all_subcategories()) {
      std::string letter(1, subcategory_letter(subcat));
      a.sig_counts[subcategory_index(subcat)] =
          parse_count(cell("sig_" + letter), path, r + 1);
      a.insig_counts[subcategory_index(subcat)] =
          parse_count(cell("insig_" + letter), path, r + 1);
    }
    annotations.push_back(std::move(a));
  }
  return annotations;
}

PreferenceSet load_preferences(const std::filesystem::path& path) {
  auto rows = util::read_csv(path);
  if (rows.empty()) fail(Errc::malformed_record, path.string() + ": empty");
  std::unordered_map<std::string, size_t> columns;
  for (size_t c = 0; c < rows[0].size(); ++c) columns[rows[0][c]] = c;
  for (const char* key : {"rater_id", "case_id", "chosen", "confidence"}) {
    if (!columns.count(key)) {
      malformed(path, 1, std::string("missing column '") + key + "'");
    }
  }
  PreferenceSet set;
  std::vector<std::string> case_order;
  std::map<std::string, std::set<Choice>> choices_by_case;
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    auto cell = [&](const char* key) -> const std::string& {
      size_t c = columns.at(key);
      if (c >= row.size()) malformed(path, r + 1, "too few fields");
      return row[c];
    };
    PreferenceRecord rec;
    rec.rater_id = cell("rater_id");
    rec.case_id = cell("case_id");
    if (rec.rater_id.empty() || rec.case_id.empty()) {
      malformed(path, r + 1, "empty rater_id or case_id");
    }
    std::string chosen = util::to_lower(util::trim(cell("chosen")));
    if (chosen == "1" || chosen == "candidate1") {
      rec.chosen = Choice::candidate1;
    } else if (chosen == "2" || chosen == "candidate2") {
      rec.chosen = Choice::candidate2;
    } else {
      malformed(path, r + 1, "chosen must be 1/2/candidate1/candidate2");
    }
    int confidence = parse_count(cell("confidence"), path, r + 1);
    if (confidence < 1 || confidence > 10) {
      fail(Errc::confidence_out_of_range,
           std::to_string(confidence) + " at " + path.string() + ":" +
               std::to_string(r + 1));
    }
    rec.confidence = confidence;
    if (!choices_by_case.count(rec.case_id)) case_order.push_back(rec.case_id);
    choices_by_case[rec.case_id].insert(rec.chosen);
    set.records.push_back(std::move(rec));
  }
  for (const auto& case_id : case_order) {
    if (choices_by_case[case_id].size() > 1) {
      set.discordant_cases.push_back(case_id);
    } else {
      set.concordant_cases.push_back(case_id);
    }
  }
  return set;
}

}  // namespace green
