#include "green/cli/commands.hpp"

#include <nlohmann/json.hpp>

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <map>
#include <set>

#include "green/analysis.hpp"
#include "green/corpus.hpp"
#include "green/gateway.hpp"
#include "green/prompting.hpp"
#include "green/scoring.hpp"
#include "green/stats.hpp"
#include "green/summarizer.hpp"
#include "green/synthesis.hpp"
#include "green/util/io.hpp"
#include "green/util/rng.hpp"
#include "green/util/text.hpp"

namespace green::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string fmt(const char* spec, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, value);
  return buf;
}

std::filesystem::path require_path(const RunConfig& config,
                                   const std::string& name) {
  std::string value = config.path(name);
  if (value.empty()) {
    fail(Errc::config_error, "paths." + name + " is not set");
  }
  return value;
}

void write_manifest(const std::filesystem::path& run_dir,
                    const std::string& command, const RunConfig& config,
                    const std::map<std::string, std::string>& checksums,
                    const ordered_json& counts) {
  ordered_json manifest;
  manifest["command"] = command;
  manifest["config_hash"] = config.config_hash();
  manifest["seed"] = config.seed();
  if (!checksums.empty()) {
    ordered_json sums;
    for (const auto& [name, digest] : checksums) sums[name] = digest;
    manifest["template_checksums"] = std::move(sums);
  }
  manifest["counts"] = counts;
  util::write_file(run_dir / "manifest.json", manifest.dump(2) + "\n");
}

void write_failures(const std::filesystem::path& run_dir,
                    const std::vector<ordered_json>& failures) {
  std::string out;
  for (const auto& failure : failures) {
    out += failure.dump();
    out += '\n';
  }
  util::write_file(run_dir / "failures.jsonl", out);
}

int exit_for_failures(size_t failures, size_t items, double threshold) {
  if (items == 0 || failures == 0) return kExitOk;
  double fraction = static_cast<double>(failures) / static_cast<double>(items);
  return fraction > threshold ? kExitPartialFailures : kExitOk;
}

int half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

struct CaseTriple {
  std::string case_id;
  std::string reference;
  std::string candidate1;
  std::string candidate2;
};

std::vector<CaseTriple> load_cases(const std::filesystem::path& path) {
  std::vector<CaseTriple> cases;
  std::set<std::string> seen;
  auto lines = util::split_lines(util::read_file(path));
  for (size_t i = 0; i < lines.size(); ++i) {
    if (util::trim(lines[i]).empty()) continue;
    json record = json::parse(lines[i], nullptr, false);
    if (record.is_discarded() || !record.is_object()) {
      fail(Errc::malformed_record,
           path.string() + ":" + std::to_string(i + 1));
    }
    CaseTriple triple;
    for (auto [key, out] : {std::pair<const char*, std::string*>{
                                "case_id", &triple.case_id},
                            {"reference", &triple.reference},
                            {"candidate1", &triple.candidate1},
                            {"candidate2", &triple.candidate2}}) {
      if (!record.contains(key) || !record[key].is_string() ||
          record[key].get<std::string>().empty()) {
        fail(Errc::malformed_record, path.string() + ":" +
                                         std::to_string(i + 1) +
                                         ": missing field '" + key + "'");
      }
      *out = record[key].get<std::string>();
    }
    if (!seen.insert(triple.case_id).second) {
      fail(Errc::duplicate_id, triple.case_id);
    }
    cases.push_back(std::move(triple));
  }
  return cases;
}

struct SourceReport {
  std::string id;
  std::string text;
};

std::vector<SourceReport> load_reports(const std::filesystem::path& path) {
  std::vector<SourceReport> reports;
  std::set<std::string> seen;
  auto lines = util::split_lines(util::read_file(path));
  for (size_t i = 0; i < lines.size(); ++i) {
    if (util::trim(lines[i]).empty()) continue;
    json record = json::parse(lines[i], nullptr, false);
    if (record.is_discarded() || !record.is_object() ||
        !record.contains("id") || !record["id"].is_string() ||
        !record.contains("text") || !record["text"].is_string()) {
      fail(Errc::malformed_record,
           path.string() + ":" + std::to_string(i + 1));
    }
    SourceReport report{record["id"].get<std::string>(),
                        record["text"].get<std::string>()};
    if (report.id.empty() || util::trim(report.text).empty()) {
      fail(Errc::malformed_record,
           path.string() + ":" + std::to_string(i + 1) + ": empty field");
    }
    if (!seen.insert(report.id).second) fail(Errc::duplicate_id, report.id);
    reports.push_back(std::move(report));
  }
  return reports;
}

std::string ordering_label(double first, double second, bool higher_wins) {
  if (first == second) return "equal";
  bool first_wins = (first > second) == higher_wins;
  return first_wins ? "candidate1" : "candidate2";
}

}  // namespace

std::filesystem::path resolve_run_dir(const RunConfig& config) {
  std::filesystem::path dir;
  if (!config.run_dir().empty()) {
    dir = config.run_dir();
  } else {
    auto now = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char stamp[64];
    std::strftime(stamp, sizeof(stamp), "run-%Y%m%d-%H%M%S", &tm_utc);
    dir = config.output_dir() /
          (std::string(stamp) + "-" + std::to_string(::getpid()));
  }
  std::filesystem::create_directories(dir);
  return dir;
}

int cmd_evaluate(const RunConfig& config) {
  auto templates = TemplateLibrary::load(config.templates_dir());
  auto pairs_path = require_path(config, "pairs");
  auto pairs = load_pairs(pairs_path, pair_format_for(pairs_path));
  if (pairs.empty()) fail(Errc::empty_input, "no pairs in " + pairs_path.string());

  Gateway gateway(config.backend());
  std::vector<std::string> prompts, keys;
  prompts.reserve(pairs.size());
  keys.reserve(pairs.size());
  for (const auto& pair : pairs) {
    prompts.push_back(
        build_eval_prompt(templates, pair.reference, pair.candidate));
    keys.push_back(pair.id);
  }
  auto items = gateway.complete_batch(prompts, keys);

  std::vector<GreenResult> results;
  std::vector<ordered_json> failures;
  size_t parse_failures = 0, backend_failures = 0, truncated = 0;
  for (size_t i = 0; i < items.size(); ++i) {
    const auto& item = items[i];
    if (!item.ok) {
      ++backend_failures;
      failures.push_back({{"pair_id", pairs[i].id},
                          {"stage", "backend"},
                          {"error", item.error}});
      continue;
    }
    if (item.response.truncated) ++truncated;
    try {
      auto analysis = parse_green_analysis(item.response.text);
      results.push_back(make_result(pairs[i].id, std::move(analysis),
                                    item.response.request_fingerprint));
    } catch (const Error& e) {
      ++parse_failures;
      failures.push_back({{"pair_id", pairs[i].id},
                          {"stage", "parse"},
                          {"error", e.what()}});
    }
  }

  auto run_dir = resolve_run_dir(config);
  write_results(results, run_dir / "results.jsonl");
  write_failures(run_dir, failures);

  ordered_json agg_json;
  if (!results.empty()) {
    auto agg = aggregate(results, static_cast<int>(parse_failures));
    agg_json = {{"mean", agg.mean},
                {"std_population", agg.std_population},
                {"std_sample", agg.std_sample},
                {"n", agg.n},
                {"parse_failures", agg.parse_failures}};
    std::printf("evaluate: n=%d mean=%s std=%s failures=%zu\n", agg.n,
                fmt("%.4f", agg.mean).c_str(),
                fmt("%.4f", agg.std_population).c_str(),
                parse_failures + backend_failures);
  } else {
    agg_json = {{"n", 0},
                {"parse_failures", static_cast<int>(parse_failures)}};
    std::printf("evaluate: n=0 failures=%zu\n",
                parse_failures + backend_failures);
  }
  util::write_file(run_dir / "aggregate.json", agg_json.dump(2) + "\n");

  ordered_json counts;
  counts["items"] = pairs.size();
  counts["succeeded"] = results.size();
  counts["parse_failures"] = parse_failures;
  counts["backend_failures"] = backend_failures;
  counts["truncated"] = truncated;
  write_manifest(run_dir, "evaluate", config, templates.checksums(), counts);

  return exit_for_failures(parse_failures + backend_failures, pairs.size(),
                           config.failure_threshold());
}

int cmd_summarize(const RunConfig& config) {
  auto results = load_results(require_path(config, "results"));
  Gateway gateway(config.embedding_backend());
  auto embed = [&gateway](const std::vector<std::string>& sentences) {
    return gateway.embed(sentences);
  };
  auto report = build_summary(results, embed, config.seed());
  std::string text = render_summary(report);

  auto run_dir = resolve_run_dir(config);
  util::write_file(run_dir / "summary.txt", text);
  util::write_file(run_dir / "summary.json", summary_to_json(report));

  ordered_json counts;
  counts["results"] = results.size();
  write_manifest(run_dir, "summarize", config, {}, counts);

  std::fputs(text.c_str(), stdout);
  return kExitOk;
}

namespace {

struct ValidationInputs {
  std::vector<std::string> pair_ids;
  std::vector<const GreenResult*> results;           // aligned with pair_ids
  std::vector<std::vector<ExpertAnnotation>> groups;  // aligned with pair_ids
};

ValidationInputs align_annotations(
    const std::vector<GreenResult>& results,
    const std::vector<ExpertAnnotation>& annotations) {
  std::map<std::string, const GreenResult*> by_id;
  for (const auto& result : results) by_id[result.pair_id] = &result;

  ValidationInputs inputs;
  std::map<std::string, size_t> slot;
  for (const auto& annotation : annotations) {
    auto it = by_id.find(annotation.pair_id);
    if (it == by_id.end()) {
      fail(Errc::missing_annotation,
           annotation.pair_id + " has no evaluated result");
    }
    auto [slot_it, inserted] = slot.try_emplace(annotation.pair_id,
                                                inputs.pair_ids.size());
    if (inserted) {
      inputs.pair_ids.push_back(annotation.pair_id);
      inputs.results.push_back(it->second);
      inputs.groups.emplace_back();
    }
    inputs.groups[slot_it->second].push_back(annotation);
  }
  return inputs;
}

ordered_json correlation_entry(const std::vector<double>& metric,
                               const std::vector<double>& expert_errors,
                               int resamples, uint64_t seed) {
  ordered_json entry;
  try {
    auto result = tau_with_ci(metric, expert_errors, resamples, seed);
    entry["tau"] = result.tau;
    entry["abs_tau"] = std::fabs(result.tau);
    entry["ci_low"] = result.ci_low;
    entry["ci_high"] = result.ci_high;
    entry["n"] = result.n;
    entry["resamples"] = result.resamples;
  } catch (const Error& e) {
    entry["error"] = e.what();
  }
  return entry;
}

ordered_json wilcoxon_entry(const std::vector<double>& a,
                            const std::vector<double>& b) {
  ordered_json entry;
  try {
    auto result = wilcoxon_signed_rank(a, b);
    entry["w"] = result.w_statistic;
    entry["p"] = result.p_value;
    entry["n_effective"] = result.n_effective;
    entry["exact"] = result.exact;
  } catch (const Error& e) {
    entry["error"] = e.what();
  }
  return entry;
}

struct PreferRow {
  std::string case_id;
  double score1 = 0.0, score2 = 0.0;
  double errors1 = 0.0, errors2 = 0.0;
  std::string direct_label;  // empty when absent
};

std::vector<PreferRow> load_prefer_rows(const std::filesystem::path& path) {
  std::vector<PreferRow> rows;
  auto lines = util::split_lines(util::read_file(path));
  for (size_t i = 0; i < lines.size(); ++i) {
    if (util::trim(lines[i]).empty()) continue;
    json record = json::parse(lines[i], nullptr, false);
    if (record.is_discarded() || !record.is_object()) {
      fail(Errc::malformed_record,
           path.string() + ":" + std::to_string(i + 1));
    }
    PreferRow row;
    try {
      row.case_id = record.at("case_id").get<std::string>();
      row.score1 = record.at("score1").get<double>();
      row.score2 = record.at("score2").get<double>();
      row.errors1 = record.at("errors1").get<double>();
      row.errors2 = record.at("errors2").get<double>();
      if (record.contains("direct_label") &&
          record["direct_label"].is_string()) {
        row.direct_label = record["direct_label"].get<std::string>();
      }
    } catch (const json::exception& e) {
      fail(Errc::malformed_record, path.string() + ":" +
                                       std::to_string(i + 1) + ": " +
                                       e.what());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string render_validation_text(const ordered_json& report) {
  std::string out = "[Validation]:\n";
  out += "pairs: " + std::to_string(report["n_pairs"].get<int>()) +
         "  raters: " + std::to_string(report["n_raters"].get<int>()) + "\n";

  out += "\n[Correlation vs mean expert total errors]:\n";
  for (const auto& [name, entry] : report["correlation"].items()) {
    out += name + ": ";
    if (entry.contains("error")) {
      out += entry["error"].get<std::string>() + "\n";
      continue;
    }
    out += "tau " + fmt("%.3f", entry["tau"].get<double>());
    out += " (95% CI, " + fmt("%.3f", entry["ci_low"].get<double>()) + " " +
           fmt("%.3f", entry["ci_high"].get<double>()) + ")";
    out += " n=" + std::to_string(entry["n"].get<int>()) + "\n";
  }

  if (report.contains("mae_matrix")) {
    const auto& matrix = report["mae_matrix"];
    out += "\n[MAE matrix, significant totals]:\n";
    auto names = matrix["raters"].get<std::vector<std::string>>();
    out += std::string(10, ' ');
    for (const auto& name : names) {
      char cell[32];
      std::snprintf(cell, sizeof(cell), "%10s", name.c_str());
      out += cell;
    }
    out += "\n";
    const auto& cells = matrix["mae"];
    for (size_t i = 0; i < names.size(); ++i) {
      char head[32];
      std::snprintf(head, sizeof(head), "%-10s", names[i].c_str());
      out += head;
      for (size_t j = 0; j < names.size(); ++j) {
        if (i == j) {
          out += "         -";
        } else {
          out += fmt("%10.3f", cells[i][j].get<double>());
        }
      }
      out += "\n";
    }
    out += "mean expert-expert mae: " +
           fmt("%.3f", matrix["mean_off_diagonal_experts"].get<double>()) +
           "\n";
  }

  out += "\n[Subcategory significant counts vs experts]:\n";
  for (const auto& [letter, entry] : report["subcategories"].items()) {
    out += "(" + letter + ") " + entry["description"].get<std::string>() +
           ": accuracy " + fmt("%.3f", entry["accuracy"].get<double>()) +
           " mae " + fmt("%.3f", entry["mae"].get<double>()) + "\n";
  }

  out += "\n[Wilcoxon signed-rank vs mean expert]:\n";
  for (const auto& [name, entry] : report["wilcoxon"].items()) {
    out += name + ": ";
    if (entry.contains("error")) {
      out += entry["error"].get<std::string>() + "\n";
      continue;
    }
    out += "W=" + fmt("%.1f", entry["w"].get<double>()) +
           " p=" + fmt("%.4f", entry["p"].get<double>()) +
           " n_eff=" + std::to_string(entry["n_effective"].get<int>()) +
           (entry["exact"].get<bool>() ? " exact" : " approx") + "\n";
  }

  if (report.contains("preference")) {
    const auto& pref = report["preference"];
    out += "\n[Preference concordance]:\n";
    for (const char* name : {"green_score", "total_error_count",
                             "direct_label"}) {
      if (!pref.contains(name)) continue;
      const auto& entry = pref[name];
      if (entry.contains("error")) {
        out += std::string(name) + ": " + entry["error"].get<std::string>() +
               "\n";
        continue;
      }
      out += std::string(name) + ": accuracy " +
             fmt("%.3f", entry["accuracy"].get<double>()) + " (95% CI, " +
             fmt("%.3f", entry["ci_low"].get<double>()) + " " +
             fmt("%.3f", entry["ci_high"].get<double>()) + ") n=" +
             std::to_string(entry["n"].get<int>()) + " ties=" +
             std::to_string(entry["ties"].get<int>()) + "\n";
    }
    if (pref.contains("confidence_curve")) {
      out += "confidence curve:";
      for (const auto& point : pref["confidence_curve"]) {
        out += " >=" + std::to_string(point["cutoff"].get<int>()) + ": " +
               fmt("%.3f", point["accuracy"].get<double>()) + " (n=" +
               std::to_string(point["n"].get<int>()) + ");";
      }
      out += "\n";
    }
  }
  return out;
}

}  // namespace

int cmd_validate(const RunConfig& config) {
  auto results = load_results(require_path(config, "results"));
  auto annotations =
      load_expert_annotations(require_path(config, "annotations"));
  auto inputs = align_annotations(results, annotations);
  if (inputs.pair_ids.empty()) {
    fail(Errc::empty_input, "no annotated pairs to validate");
  }

  size_t n = inputs.pair_ids.size();
  std::vector<double> model_scores(n), model_sig(n), model_total(n);
  std::vector<double> expert_sig_mean(n), expert_total_mean(n);
  std::vector<GreenAnalysis> model_analyses(n);
  for (size_t i = 0; i < n; ++i) {
    const auto& result = *inputs.results[i];
    model_scores[i] = result.score;
    model_sig[i] = significant_error_count(result.analysis);
    model_total[i] = total_error_count(result.analysis);
    model_analyses[i] = result.analysis;
    double sig_sum = 0.0, total_sum = 0.0;
    for (const auto& annotation : inputs.groups[i]) {
      sig_sum += significant_total(annotation);
      total_sum += total_errors(annotation);
    }
    auto raters = static_cast<double>(inputs.groups[i].size());
    expert_sig_mean[i] = sig_sum / raters;
    expert_total_mean[i] = total_sum / raters;
  }

  std::set<std::string> rater_ids;
  for (const auto& annotation : annotations) {
    rater_ids.insert(annotation.rater_id);
  }

  int resamples = config.bootstrap_resamples();
  uint64_t seed = config.seed();

  ordered_json report;
  report["n_pairs"] = static_cast<int>(n);
  report["n_raters"] = static_cast<int>(rater_ids.size());

  ordered_json correlation;
  correlation["green_score"] =
      correlation_entry(model_scores, expert_total_mean, resamples,
                        util::derive_seed(seed, 1));
  correlation["total_error_count"] =
      correlation_entry(model_total, expert_total_mean, resamples,
                        util::derive_seed(seed, 2));
  correlation["significant_error_count"] =
      correlation_entry(model_sig, expert_sig_mean, resamples,
                        util::derive_seed(seed, 3));
  report["correlation"] = std::move(correlation);

  // MAE matrix over raters with complete coverage, plus the model as an
  // extra pseudo-rater.
  {
    std::map<std::string, std::map<std::string, double>> sig_by_rater;
    for (const auto& annotation : annotations) {
      sig_by_rater[annotation.rater_id][annotation.pair_id] =
          significant_total(annotation);
    }
    std::vector<std::pair<std::string, std::vector<double>>> raters;
    for (const auto& [rater_id, by_pair] : sig_by_rater) {
      std::vector<double> values;
      values.reserve(n);
      bool complete = true;
      for (const auto& pair_id : inputs.pair_ids) {
        auto it = by_pair.find(pair_id);
        if (it == by_pair.end()) {
          complete = false;
          break;
        }
        values.push_back(it->second);
      }
      if (complete) raters.emplace_back(rater_id, std::move(values));
    }
    if (raters.size() >= 2) {
      auto expert_matrix = mae_matrix(raters);
      double expert_mean = expert_matrix.mean_off_diagonal();
      raters.emplace_back("green", model_sig);
      auto matrix = mae_matrix(raters);
      ordered_json node;
      node["raters"] = matrix.rater_ids;
      ordered_json cells = ordered_json::array();
      for (const auto& row : matrix.cells) {
        ordered_json row_json = ordered_json::array();
        for (const auto& cell : row) row_json.push_back(cell.mae);
        cells.push_back(std::move(row_json));
      }
      node["mae"] = std::move(cells);
      node["mean_off_diagonal_experts"] = expert_mean;
      report["mae_matrix"] = std::move(node);
    }
  }

  {
    auto accuracy =
        subcategory_accuracy(model_analyses, inputs.groups, inputs.pair_ids);
    auto mae = subcategory_mae(model_analyses, inputs.groups, inputs.pair_ids);
    ordered_json node;
    for (auto subcat : all_subcategories()) {
      int idx = subcategory_index(subcat);
      ordered_json entry;
      entry["description"] = std::string(subcategory_description(subcat));
      entry["accuracy"] = accuracy[static_cast<size_t>(idx)];
      entry["mae"] = mae[static_cast<size_t>(idx)].mae;
      entry["mae_std"] = mae[static_cast<size_t>(idx)].std_sample;
      node[std::string(1, subcategory_letter(subcat))] = std::move(entry);
    }
    report["subcategories"] = std::move(node);
  }

  ordered_json wilcoxon;
  wilcoxon["significant_counts"] = wilcoxon_entry(model_sig, expert_sig_mean);
  wilcoxon["total_counts"] = wilcoxon_entry(model_total, expert_total_mean);
  report["wilcoxon"] = std::move(wilcoxon);

  if (!config.path("preferences").empty() &&
      !config.path("prefer_results").empty()) {
    auto preferences = load_preferences(require_path(config, "preferences"));
    auto rows = load_prefer_rows(require_path(config, "prefer_results"));
    std::set<std::string> concordant(preferences.concordant_cases.begin(),
                                     preferences.concordant_cases.end());
    std::map<std::string, Choice> choice_by_case;
    std::map<std::string, std::pair<double, int>> confidence_by_case;
    for (const auto& record : preferences.records) {
      if (!concordant.count(record.case_id)) continue;
      choice_by_case[record.case_id] = record.chosen;
      auto& acc = confidence_by_case[record.case_id];
      acc.first += record.confidence;
      acc.second += 1;
    }

    std::vector<double> s1, s2, e1, e2;
    std::vector<Choice> choices;
    std::vector<int> confidences;
    int direct_correct = 0, direct_used = 0, direct_ties = 0;
    for (const auto& row : rows) {
      auto it = choice_by_case.find(row.case_id);
      if (it == choice_by_case.end()) continue;
      s1.push_back(row.score1);
      s2.push_back(row.score2);
      e1.push_back(row.errors1);
      e2.push_back(row.errors2);
      choices.push_back(it->second);
      const auto& acc = confidence_by_case[row.case_id];
      confidences.push_back(half_up(acc.first / acc.second));
      if (!row.direct_label.empty()) {
        if (row.direct_label == "equal") {
          ++direct_ties;
        } else {
          Choice predicted = row.direct_label == "candidate1"
                                 ? Choice::candidate1
                                 : Choice::candidate2;
          if (predicted == it->second) ++direct_correct;
          ++direct_used;
        }
      }
    }

    ordered_json pref;
    pref["cases"] = s1.size();
    pref["discordant_excluded"] = preferences.discordant_cases.size();
    auto outcome_entry = [](const PreferenceOutcome& outcome) {
      return ordered_json{{"accuracy", outcome.accuracy},
                          {"ci_low", outcome.ci_low},
                          {"ci_high", outcome.ci_high},
                          {"n", outcome.n_used},
                          {"ties", outcome.n_ties}};
    };
    try {
      pref["green_score"] = outcome_entry(
          preference_accuracy(s1, s2, choices, /*higher_is_better=*/true));
    } catch (const Error& e) {
      pref["green_score"] = ordered_json{{"error", e.what()}};
    }
    try {
      pref["total_error_count"] = outcome_entry(
          preference_accuracy(e1, e2, choices, /*higher_is_better=*/false));
    } catch (const Error& e) {
      pref["total_error_count"] = ordered_json{{"error", e.what()}};
    }
    if (direct_used > 0) {
      auto ci = wilson_interval(direct_correct, direct_used);
      pref["direct_label"] = ordered_json{
          {"accuracy", static_cast<double>(direct_correct) / direct_used},
          {"ci_low", ci.low},
          {"ci_high", ci.high},
          {"n", direct_used},
          {"ties", direct_ties}};
    }
    auto curve = confidence_stratified_accuracy(
        s1, s2, choices, confidences, /*higher_is_better=*/true,
        config.confidence_cutoffs());
    ordered_json curve_json = ordered_json::array();
    for (const auto& point : curve) {
      curve_json.push_back({{"cutoff", point.cutoff},
                            {"accuracy", point.accuracy},
                            {"n", point.n}});
    }
    pref["confidence_curve"] = std::move(curve_json);
    report["preference"] = std::move(pref);
  }

  auto run_dir = resolve_run_dir(config);
  util::write_file(run_dir / "validation.json", report.dump(2) + "\n");
  std::string text = render_validation_text(report);
  util::write_file(run_dir / "validation.txt", text);

  ordered_json counts;
  counts["pairs"] = n;
  counts["annotations"] = annotations.size();
  write_manifest(run_dir, "validate", config, {}, counts);

  std::fputs(text.c_str(), stdout);
  return kExitOk;
}

int cmd_synthesize(const RunConfig& config) {
  auto reports = load_reports(require_path(config, "reports"));
  if (reports.size() < 2) {
    fail(Errc::too_few_reports, "synthesis needs >= 2 reports");
  }
  auto heuristics = config.heuristics();
  if (heuristics.empty()) {
    fail(Errc::config_error, "synthesize.heuristics is empty");
  }

  uint64_t seed = config.seed();
  std::vector<size_t> order(reports.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  bool exclusive = config.synthesize_exclusive() && heuristics.size() > 1;
  if (exclusive) {
    // Disjoint blocks per heuristic: no report is consumed twice.
    std::mt19937_64 rng(util::derive_seed(seed, 7));
    util::shuffle(order, rng);
  }

  std::vector<std::vector<size_t>> blocks;
  if (exclusive) {
    size_t h = heuristics.size();
    size_t base = order.size() / h, extra = order.size() % h;
    size_t cursor = 0;
    for (size_t b = 0; b < h; ++b) {
      size_t size = base + (b < extra ? 1 : 0);
      blocks.emplace_back(order.begin() + static_cast<long>(cursor),
                          order.begin() + static_cast<long>(cursor + size));
      std::sort(blocks.back().begin(), blocks.back().end());
      cursor += size;
    }
  } else {
    blocks.assign(heuristics.size(), order);
  }

  std::vector<ReportPair> pairs;
  std::vector<ordered_json> failures;
  ordered_json per_heuristic;
  size_t skipped = 0;

  for (size_t h = 0; h < heuristics.size(); ++h) {
    const auto& heuristic = heuristics[h];
    std::mt19937_64 rng(util::derive_seed(seed, 100 + h));
    std::vector<std::string> block_texts;
    std::vector<std::string> block_ids;
    for (size_t idx : blocks[h]) {
      block_texts.push_back(reports[idx].text);
      block_ids.push_back(reports[idx].id);
    }
    size_t before = pairs.size();

    if (heuristic == "shuffle" || heuristic == "drop") {
      for (size_t i = 0; i < block_texts.size(); ++i) {
        try {
          std::string candidate =
              heuristic == "shuffle"
                  ? shuffle_sentences(block_texts[i], rng)
                  : drop_sentences(block_texts[i], config.drop_fraction(),
                                   rng);
          pairs.push_back({"", block_texts[i], candidate, heuristic});
        } catch (const Error& e) {
          if (e.code() != Errc::too_few_sentences) throw;
          ++skipped;  // single-sentence reports cannot feed this heuristic
        }
      }
    } else if (heuristic == "random_pair") {
      for (auto& pair : random_pairing(block_texts, rng)) {
        pair.id.clear();
        pairs.push_back(std::move(pair));
      }
    } else if (heuristic == "cross_mix") {
      if (block_texts.size() < 2) {
        fail(Errc::too_few_reports, "cross_mix block has < 2 reports");
      }
      for (size_t i = 0; i < block_texts.size(); ++i) {
        auto mixed = cross_mix_sentences(block_texts, rng);
        pairs.push_back(
            {"", block_texts[mixed.sources[0]], mixed.text, heuristic});
      }
    } else if (heuristic == "nearest_pair") {
      auto matrix = load_similarity(require_path(config, "similarity"));
      if (matrix.n != reports.size()) {
        fail(Errc::shape_mismatch, "similarity matrix must cover all reports");
      }
      SimilarityMatrix sub;
      sub.n = blocks[h].size();
      sub.values.assign(sub.n * sub.n, 0.0);
      for (size_t i = 0; i < sub.n; ++i) {
        for (size_t j = 0; j < sub.n; ++j) {
          sub.values[i * sub.n + j] = matrix.at(blocks[h][i], blocks[h][j]);
        }
      }
      for (auto& pair : nearest_pairing(block_texts, sub, true)) {
        pair.id.clear();
        pairs.push_back(std::move(pair));
      }
    } else if (heuristic == "corrupt") {
      auto templates = TemplateLibrary::load(config.templates_dir());
      Gateway gateway(config.backend());
      for (size_t i = 0; i < block_texts.size(); ++i) {
        auto spec = sample_corruption_spec(rng);
        try {
          std::string candidate =
              corrupt_via_backend(block_texts[i], spec, gateway, templates,
                                  "corrupt-" + block_ids[i]);
          pairs.push_back({"", block_texts[i], candidate, heuristic});
        } catch (const Error& e) {
          failures.push_back({{"report_id", block_ids[i]},
                              {"stage", "corrupt"},
                              {"error", e.what()}});
        }
      }
    } else {
      fail(Errc::config_error, "unknown heuristic '" + heuristic + "'");
    }
    per_heuristic[heuristic] = pairs.size() - before;
  }

  for (size_t i = 0; i < pairs.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "syn-%06zu", i);
    pairs[i].id = id;
  }

  auto run_dir = resolve_run_dir(config);
  write_pairs(pairs, run_dir / "pairs.jsonl");
  auto split = split_80_10_10(pairs, util::derive_seed(seed, 8));
  write_pairs(split.train, run_dir / "train.jsonl");
  write_pairs(split.val, run_dir / "val.jsonl");
  write_pairs(split.test, run_dir / "test.jsonl");
  write_failures(run_dir, failures);

  ordered_json counts;
  counts["reports"] = reports.size();
  counts["pairs"] = pairs.size();
  counts["per_heuristic"] = per_heuristic;
  counts["skipped_reports"] = skipped;
  counts["failures"] = failures.size();
  counts["split"] = {{"train", split.train.size()},
                     {"val", split.val.size()},
                     {"test", split.test.size()}};
  write_manifest(run_dir, "synthesize", config, {}, counts);

  std::printf("synthesize: reports=%zu pairs=%zu failures=%zu\n",
              reports.size(), pairs.size(), failures.size());
  return exit_for_failures(failures.size(), reports.size(),
                           config.failure_threshold());
}

int cmd_prefer(const RunConfig& config) {
  auto templates = TemplateLibrary::load(config.templates_dir());
  auto cases = load_cases(require_path(config, "cases"));
  if (cases.empty()) fail(Errc::empty_input, "no cases");
  bool direct = config.prefer_direct();

  Gateway gateway(config.backend());
  std::vector<std::string> prompts, keys;
  for (const auto& triple : cases) {
    prompts.push_back(
        build_eval_prompt(templates, triple.reference, triple.candidate1));
    keys.push_back(triple.case_id + "#1");
    prompts.push_back(
        build_eval_prompt(templates, triple.reference, triple.candidate2));
    keys.push_back(triple.case_id + "#2");
    if (direct) {
      prompts.push_back(build_preference_prompt(
          templates, triple.reference, triple.candidate1, triple.candidate2));
      keys.push_back(triple.case_id + "#pref");
    }
  }
  auto items = gateway.complete_batch(prompts, keys);

  size_t stride = direct ? 3 : 2;
  std::string rows_out;
  std::vector<ordered_json> failures;
  size_t succeeded = 0, parse_failures = 0, backend_failures = 0,
         truncated = 0, direct_failures = 0;
  for (size_t c = 0; c < cases.size(); ++c) {
    const auto& triple = cases[c];
    const auto& item1 = items[c * stride];
    const auto& item2 = items[c * stride + 1];
    bool ok = true;
    GreenAnalysis analysis1, analysis2;
    for (auto [item, side] : {std::pair<const BatchItem*, int>{&item1, 1},
                              {&item2, 2}}) {
      std::string id = triple.case_id + "#" + std::to_string(side);
      if (!item->ok) {
        ++backend_failures;
        failures.push_back(
            {{"pair_id", id}, {"stage", "backend"}, {"error", item->error}});
        ok = false;
        continue;
      }
      if (item->response.truncated) ++truncated;
      try {
        auto analysis = parse_green_analysis(item->response.text);
        (side == 1 ? analysis1 : analysis2) = std::move(analysis);
      } catch (const Error& e) {
        ++parse_failures;
        failures.push_back(
            {{"pair_id", id}, {"stage", "parse"}, {"error", e.what()}});
        ok = false;
      }
    }

    std::string direct_label;
    if (direct) {
      const auto& pref_item = items[c * stride + 2];
      if (!pref_item.ok) {
        ++direct_failures;
        failures.push_back({{"pair_id", triple.case_id + "#pref"},
                            {"stage", "backend"},
                            {"error", pref_item.error}});
      } else {
        try {
          switch (parse_preference(pref_item.response.text)) {
            case PreferenceLabel::first_better:
              direct_label = "candidate1";
              break;
            case PreferenceLabel::second_better:
              direct_label = "candidate2";
              break;
            case PreferenceLabel::equal:
              direct_label = "equal";
              break;
          }
        } catch (const Error& e) {
          ++direct_failures;
          failures.push_back({{"pair_id", triple.case_id + "#pref"},
                              {"stage", "parse"},
                              {"error", e.what()}});
        }
      }
    }

    if (!ok) continue;
    ++succeeded;
    double score1 = green_score(analysis1);
    double score2 = green_score(analysis2);
    int errors1 = total_error_count(analysis1);
    int errors2 = total_error_count(analysis2);
    ordered_json row;
    row["case_id"] = triple.case_id;
    row["score1"] = score1;
    row["score2"] = score2;
    row["green_label"] = ordering_label(score1, score2, true);
    row["errors1"] = errors1;
    row["errors2"] = errors2;
    row["error_count_label"] = ordering_label(errors1, errors2, false);
    if (!direct_label.empty()) row["direct_label"] = direct_label;
    rows_out += row.dump();
    rows_out += '\n';
  }

  auto run_dir = resolve_run_dir(config);
  util::write_file(run_dir / "prefer_results.jsonl", rows_out);
  write_failures(run_dir, failures);

  ordered_json counts;
  counts["cases"] = cases.size();
  counts["succeeded"] = succeeded;
  counts["parse_failures"] = parse_failures;
  counts["backend_failures"] = backend_failures;
  counts["truncated"] = truncated;
  counts["direct_failures"] = direct_failures;
  write_manifest(run_dir, "prefer", config, templates.checksums(), counts);

  std::printf("prefer: cases=%zu succeeded=%zu failures=%zu\n", cases.size(),
              succeeded, cases.size() - succeeded + direct_failures);
  return exit_for_failures(cases.size() - succeeded + direct_failures,
                           cases.size(), config.failure_threshold());
}

}  // namespace green::cli
