// Acceptance gate for the evaluation pipeline. Each criterion prints one
// pass/fail line and is timed against its budget; the binary exits nonzero
// if any criterion fails. argv[1] is the CLI binary used by the replay and
// determinism criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "green/analysis.hpp"
#include "green/corpus.hpp"
#include "green/errors.hpp"
#include "green/prompting.hpp"
#include "green/scoring.hpp"
#include "green/stats.hpp"
#include "green/summarizer.hpp"
#include "green/synthesis.hpp"
#include "green/taxonomy.hpp"
#include "green/util/io.hpp"
#include "green/util/rng.hpp"

namespace fs = std::filesystem;
using namespace green;

namespace {

struct Failure {
  std::string reason;
};

#define REQUIRE_MSG(cond, msg)                                   \
  do {                                                           \
    if (!(cond)) {                                               \
      std::ostringstream os_;                                    \
      os_ << msg;                                                \
      throw Failure{os_.str()};                                  \
    }                                                            \
  } while (0)

std::string g_cli_binary;
fs::path g_workspace;

fs::path fixtures_dir() { return fs::path(GREEN_FIXTURES_DIR); }
fs::path templates_dir() { return fs::path(GREEN_TEMPLATES_DIR); }

int run_cli(const std::string& args, const fs::path& log) {
  std::string cmd =
      g_cli_binary + " " + args + " >" + log.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) { return util::read_file(path); }

void expect_same_bytes(const fs::path& a, const fs::path& b) {
  REQUIRE_MSG(slurp(a) == slurp(b),
              a.filename().string() << " differs between " << a.parent_path()
                                    << " and " << b.parent_path());
}

size_t line_count(const std::string& text) {
  size_t n = 0;
  for (char c : text) {
    if (c == '\n') ++n;
  }
  return n;
}

// ---- criterion 1: golden parse ---------------------------------------------

void golden_parse() {
  std::string raw = slurp(fixtures_dir() / "golden_analysis_response.txt");
  GreenAnalysis a = parse_green_analysis(raw);
  for (int i = 0; i < kSubcategoryCount; ++i) {
    int expected_sig = (i == 2) ? 1 : 0;  // (c) location misidentification
    REQUIRE_MSG(a.sig[i].count == expected_sig,
                "sig[" << i << "] = " << a.sig[i].count);
    REQUIRE_MSG(a.insig[i].count == 0, "insig[" << i << "] nonzero");
  }
  REQUIRE_MSG(a.matched_count == 3, "matched_count = " << a.matched_count);
  REQUIRE_MSG(a.matched_findings.size() == 3,
              "matched findings = " << a.matched_findings.size());
  REQUIRE_MSG(green_score(a) == 0.75, "score = " << green_score(a));
}

// ---- criterion 2: score law over randomized analyses -----------------------

GreenAnalysis random_analysis(std::mt19937_64& rng) {
  GreenAnalysis a;
  for (int i = 0; i < kSubcategoryCount; ++i) {
    a.sig[i].count = static_cast<int>(util::uniform_index(rng, 5));
    a.insig[i].count = static_cast<int>(util::uniform_index(rng, 5));
  }
  a.matched_count = static_cast<int>(util::uniform_index(rng, 7));
  return a;
}

int sig_total(const GreenAnalysis& a) {
  int total = 0;
  for (const auto& finding : a.sig) total += finding.count;
  return total;
}

void score_law() {
  std::mt19937_64 rng(20240521);
  for (int trial = 0; trial < 10000; ++trial) {
    GreenAnalysis a = random_analysis(rng);
    double score = green_score(a);
    int sig = sig_total(a);

    REQUIRE_MSG(score >= 0.0 && score <= 1.0, "score out of range: " << score);
    REQUIRE_MSG((score == 0.0) == (a.matched_count == 0),
                "zero law broken: matched=" << a.matched_count
                                            << " score=" << score);
    REQUIRE_MSG((score == 1.0) == (a.matched_count > 0 && sig == 0),
                "one law broken: matched=" << a.matched_count << " sig=" << sig
                                           << " score=" << score);

    // Insignificant counts never move the score.
    GreenAnalysis perturbed = a;
    for (int i = 0; i < kSubcategoryCount; ++i) {
      perturbed.insig[i].count = static_cast<int>(util::uniform_index(rng, 9));
    }
    REQUIRE_MSG(green_score(perturbed) == score, "insig perturbation moved score");

    // Monotone: more matches never hurt, more significant errors never help.
    GreenAnalysis more_matched = a;
    more_matched.matched_count += 1;
    REQUIRE_MSG(green_score(more_matched) >= score, "not monotone in matched");

    GreenAnalysis more_sig = a;
    more_sig.sig[util::uniform_index(rng, kSubcategoryCount)].count += 1;
    REQUIRE_MSG(green_score(more_sig) <= score, "not monotone in sig total");
  }
}

// ---- criterion 3: statistics against brute-force oracles -------------------

double naive_tau(const std::vector<double>& x, const std::vector<double>& y) {
  size_t n = x.size();
  long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      double dx = x[i] - x[j], dy = y[i] - y[j];
      if (dx == 0 && dy == 0) continue;
      if (dx == 0) {
        ++ties_x;
      } else if (dy == 0) {
        ++ties_y;
      } else if ((dx > 0) == (dy > 0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  double n0 = static_cast<double>(n) * (n - 1) / 2.0;
  long long joint = static_cast<long long>(n0) - concordant - discordant -
                    ties_x - ties_y;
  return (concordant - discordant) /
         std::sqrt((n0 - (ties_x + joint)) * (n0 - (ties_y + joint)));
}

// Exact two-sided signed-rank p by enumerating every sign assignment.
double enumerate_wilcoxon_p(const std::vector<double>& d) {
  std::vector<double> abs_d;
  for (double v : d) {
    if (v != 0.0) abs_d.push_back(std::fabs(v));
  }
  size_t n = abs_d.size();
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return abs_d[a] < abs_d[b]; });
  std::vector<double> ranks(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && abs_d[order[j + 1]] == abs_d[order[i]]) ++j;
    double midrank = (static_cast<double>(i) + static_cast<double>(j)) / 2 + 1;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = midrank;
    i = j + 1;
  }
  std::vector<double> signed_d;
  for (double v : d) {
    if (v != 0.0) signed_d.push_back(v);
  }
  double w_plus = 0.0;
  for (size_t k = 0; k < n; ++k) {
    if (signed_d[k] > 0) w_plus += ranks[k];
  }
  long long total = 1LL << n;
  long long at_most = 0, at_least = 0;
  const double tol = 1e-9;
  for (long long mask = 0; mask < total; ++mask) {
    double w = 0.0;
    for (size_t k = 0; k < n; ++k) {
      if (mask & (1LL << k)) w += ranks[k];
    }
    if (w <= w_plus + tol) ++at_most;
    if (w >= w_plus - tol) ++at_least;
  }
  double p = 2.0 * std::min(static_cast<double>(at_most) / total,
                            static_cast<double>(at_least) / total);
  return std::min(1.0, p);
}

bool all_tied(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(),
                     [&](double x) { return x == v.front(); });
}

void stats_oracles() {
  std::mt19937_64 rng(7);

  int tau_trials = 0;
  while (tau_trials < 100) {
    size_t n = 2 + util::uniform_index(rng, 49);
    bool gridded = util::uniform_index(rng, 2) == 0;
    std::vector<double> x(n), y(n);
    for (size_t i = 0; i < n; ++i) {
      if (gridded) {  // integer grid forces ties
        x[i] = static_cast<double>(util::uniform_index(rng, 5));
        y[i] = static_cast<double>(util::uniform_index(rng, 5));
      } else {
        x[i] = util::canonical_double(rng);
        y[i] = util::canonical_double(rng);
      }
    }
    if (all_tied(x) || all_tied(y)) continue;
    ++tau_trials;
    double fast = kendall_tau(x, y);
    double slow = naive_tau(x, y);
    REQUIRE_MSG(std::fabs(fast - slow) <= 1e-12,
                "tau mismatch: " << fast << " vs " << slow);
  }

  for (int trial = 0; trial < 120; ++trial) {
    size_t n = 1 + util::uniform_index(rng, 12);
    std::vector<double> a(n), b(n);
    bool any_nonzero = false;
    for (size_t i = 0; i < n; ++i) {
      a[i] = static_cast<double>(util::uniform_index(rng, 6));
      b[i] = static_cast<double>(util::uniform_index(rng, 6));
      if (a[i] != b[i]) any_nonzero = true;
    }
    if (!any_nonzero) {
      a[0] += 1.0;  // avoid the all-zero-differences error path
    }
    std::vector<double> d(n);
    for (size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
    WilcoxonResult r = wilcoxon_signed_rank(a, b);
    REQUIRE_MSG(r.exact, "expected the exact branch for n <= 12");
    double oracle = enumerate_wilcoxon_p(d);
    REQUIRE_MSG(std::fabs(r.p_value - oracle) <= 1e-9,
                "wilcoxon p mismatch: " << r.p_value << " vs " << oracle);
  }

  // MAE matrix against flat loops.
  const int raters = 4, items = 25;
  std::vector<std::pair<std::string, std::vector<double>>> table;
  for (int r = 0; r < raters; ++r) {
    std::vector<double> counts(items);
    for (int i = 0; i < items; ++i) {
      counts[i] = static_cast<double>(util::uniform_index(rng, 9));
    }
    table.emplace_back("rater" + std::to_string(r), std::move(counts));
  }
  MaeMatrix matrix = mae_matrix(table);
  for (int r = 0; r < raters; ++r) {
    for (int c = 0; c < raters; ++c) {
      double expected = 0.0;
      for (int i = 0; i < items; ++i) {
        expected += std::fabs(table[r].second[i] - table[c].second[i]);
      }
      expected /= items;
      REQUIRE_MSG(std::fabs(matrix.cells[r][c].mae - expected) <= 1e-12,
                  "mae[" << r << "][" << c << "] mismatch");
    }
  }
}

// ---- criterion 4: summary determinism --------------------------------------

std::vector<GreenResult> replay_results() {
  std::vector<GreenResult> results;
  const char* ok_ids[] = {"p01", "p02", "p03", "p04", "p05",
                          "p06", "p08", "p09", "p10"};
  for (const char* id : ok_ids) {
    std::string raw =
        slurp(fixtures_dir() / "e2e" / "stubs" / (std::string(id) + ".txt"));
    results.push_back(make_result(id, parse_green_analysis(raw), "f-" + std::string(id)));
  }
  return results;
}

void summary_determinism() {
  fs::path ws = g_workspace / "summary";
  fs::create_directories(ws);
  fs::path results_path = ws / "results.jsonl";
  write_results(replay_results(), results_path);

  auto summarize_into = [&](const std::string& name, int max_in_flight) {
    fs::path run = ws / name;
    std::ostringstream args;
    args << "summarize --results " << results_path.string() << " --run-dir "
         << run.string() << " --templates-dir " << templates_dir().string()
         << " --set seed=777 --set embedding_backend.kind=stub"
         << " --set embedding_backend.max_in_flight=" << max_in_flight;
    int code = run_cli(args.str(), ws / (name + ".log"));
    REQUIRE_MSG(code == 0, "summarize exited " << code << " for " << name);
    return run;
  };

  fs::path first = summarize_into("run1", 1);
  fs::path again = summarize_into("run2", 1);
  fs::path third = summarize_into("run3", 1);
  fs::path wide = summarize_into("run-wide", 8);
  for (const fs::path& other : {again, third, wide}) {
    expect_same_bytes(first / "summary.txt", other / "summary.txt");
    expect_same_bytes(first / "summary.json", other / "summary.json");
  }

  // Two well-separated blobs: the larger one is chosen and only its members
  // may serve as representatives.
  std::vector<std::string> sentences;
  std::vector<std::vector<double>> points;
  std::mt19937_64 rng(11);
  for (int i = 0; i < 7; ++i) {
    sentences.push_back("close-" + std::to_string(i));
    points.push_back({0.1 * util::canonical_double(rng),
                      0.1 * util::canonical_double(rng)});
  }
  for (int i = 0; i < 3; ++i) {
    sentences.push_back("far-" + std::to_string(i));
    points.push_back({10.0 + 0.1 * util::canonical_double(rng),
                      10.0 + 0.1 * util::canonical_double(rng)});
  }
  ClusterSelection sel = cluster_and_select(sentences, points, 42);
  int chosen_size = static_cast<int>(
      std::count(sel.labels.begin(), sel.labels.end(), sel.chosen_cluster));
  REQUIRE_MSG(chosen_size == 7, "chosen cluster size = " << chosen_size);
  REQUIRE_MSG(!sel.representatives.empty(), "no representatives returned");
  for (const std::string& rep : sel.representatives) {
    REQUIRE_MSG(rep.rfind("close-", 0) == 0,
                "representative from the minority blob: " << rep);
  }
}

// ---- criterion 5: synthesis properties -------------------------------------

std::string numbered_report(std::mt19937_64& rng, size_t sentences) {
  std::ostringstream os;
  for (size_t i = 0; i < sentences; ++i) {
    if (i) os << " ";
    os << "Finding number " << i << " with token "
       << util::uniform_index(rng, 1000) << ".";
  }
  return os.str();
}

void synthesis_properties() {
  std::mt19937_64 rng(123);

  for (int trial = 0; trial < 300; ++trial) {
    size_t n = 2 + util::uniform_index(rng, 7);
    std::string report = numbered_report(rng, n);
    auto original = sentence_texts(split_sentences(report));

    auto shuffled = sentence_texts(split_sentences(shuffle_sentences(report, rng)));
    auto sorted_original = original;
    auto sorted_shuffled = shuffled;
    std::sort(sorted_original.begin(), sorted_original.end());
    std::sort(sorted_shuffled.begin(), sorted_shuffled.end());
    REQUIRE_MSG(sorted_original == sorted_shuffled,
                "shuffle changed the sentence multiset");

    auto dropped = sentence_texts(
        split_sentences(drop_sentences(report, 0.3, rng)));
    REQUIRE_MSG(dropped.size() < original.size(), "drop removed nothing");
    size_t cursor = 0;
    for (const std::string& sentence : dropped) {
      while (cursor < original.size() && original[cursor] != sentence) ++cursor;
      REQUIRE_MSG(cursor < original.size(),
                  "drop output is not a subsequence of the input");
      ++cursor;
    }
  }

  std::vector<std::string> reports;
  for (int i = 0; i < 20; ++i) {
    reports.push_back("Report " + std::to_string(i) + " body text.");
  }
  size_t draws = 0;
  while (draws < 10000) {
    for (const ReportPair& pair : random_pairing(reports, rng)) {
      REQUIRE_MSG(pair.reference != pair.candidate,
                  "self-pair drawn: " << pair.reference);
      ++draws;
    }
  }

  int subtle = 0;
  std::array<int, 7> size_counts{};
  const int samples = 10000;
  for (int i = 0; i < samples; ++i) {
    CorruptionSpec spec = sample_corruption_spec(rng);
    if (spec.subtle) ++subtle;
    REQUIRE_MSG(spec.error_types.size() <= 6, "spec size out of range");
    size_counts[spec.error_types.size()] += 1;
    std::set<ErrorSubcategory> distinct(spec.error_types.begin(),
                                        spec.error_types.end());
    REQUIRE_MSG(distinct.size() == spec.error_types.size(),
                "duplicate subcategories in one spec");
  }
  double subtle_rate = static_cast<double>(subtle) / samples;
  REQUIRE_MSG(std::fabs(subtle_rate - 0.5) <= 0.02,
              "subtle rate " << subtle_rate);
  for (int size = 0; size < 7; ++size) {
    double freq = static_cast<double>(size_counts[size]) / samples;
    REQUIRE_MSG(std::fabs(freq - 1.0 / 7.0) <= 0.02,
                "size " << size << " frequency " << freq);
  }
}

// ---- criterion 6: offline replay pipeline ----------------------------------

struct PipelineRuns {
  fs::path eval, summary, prefer, validate;
};

PipelineRuns run_pipeline(const fs::path& root) {
  fs::create_directories(root);
  fs::path fix = fixtures_dir() / "e2e";
  PipelineRuns runs{root / "eval", root / "summary", root / "prefer",
                    root / "validate"};
  std::string stub = " --set backend.kind=stub --set backend.stub_dir=" +
                     (fix / "stubs").string() +
                     " --set embedding_backend.kind=stub --templates-dir " +
                     templates_dir().string();

  int code = run_cli("evaluate --pairs " + (fix / "pairs.jsonl").string() +
                         " --run-dir " + runs.eval.string() + stub,
                     root / "evaluate.log");
  REQUIRE_MSG(code == 2, "evaluate exit " << code
                                          << " (expected 2: one parse failure"
                                             " above the zero threshold)");

  code = run_cli("prefer --cases " + (fix / "cases.jsonl").string() +
                     " --run-dir " + runs.prefer.string() + stub,
                 root / "prefer.log");
  REQUIRE_MSG(code == 0, "prefer exit " << code);

  code = run_cli("summarize --results " +
                     (runs.eval / "results.jsonl").string() + " --run-dir " +
                     runs.summary.string() + stub,
                 root / "summarize.log");
  REQUIRE_MSG(code == 0, "summarize exit " << code);

  code = run_cli("validate --results " +
                     (runs.eval / "results.jsonl").string() +
                     " --annotations " + (fix / "annotations.csv").string() +
                     " --preferences " + (fix / "preferences.csv").string() +
                     " --prefer-results " +
                     (runs.prefer / "prefer_results.jsonl").string() +
                     " --run-dir " + runs.validate.string() + stub,
                 root / "validate.log");
  REQUIRE_MSG(code == 0, "validate exit " << code);
  return runs;
}

void offline_replay() {
  fs::path ws = g_workspace / "replay";
  PipelineRuns first = run_pipeline(ws / "first");
  PipelineRuns second = run_pipeline(ws / "second");

  const char* eval_outputs[] = {"results.jsonl", "failures.jsonl",
                                "aggregate.json", "manifest.json"};
  for (const char* name : eval_outputs) {
    expect_same_bytes(first.eval / name, second.eval / name);
  }
  expect_same_bytes(first.summary / "summary.txt",
                    second.summary / "summary.txt");
  expect_same_bytes(first.summary / "summary.json",
                    second.summary / "summary.json");
  expect_same_bytes(first.prefer / "prefer_results.jsonl",
                    second.prefer / "prefer_results.jsonl");
  expect_same_bytes(first.validate / "validation.json",
                    second.validate / "validation.json");
  expect_same_bytes(first.validate / "validation.txt",
                    second.validate / "validation.txt");

  // The malformed reply must surface as exactly one tallied parse failure.
  std::string failures = slurp(first.eval / "failures.jsonl");
  REQUIRE_MSG(line_count(failures) == 1,
              "expected one failure line, got " << line_count(failures));
  REQUIRE_MSG(failures.find("\"p07\"") != std::string::npos,
              "failure line does not name the malformed pair");
  REQUIRE_MSG(failures.find("\"parse\"") != std::string::npos,
              "failure not tallied at the parse stage");
  std::string results = slurp(first.eval / "results.jsonl");
  REQUIRE_MSG(line_count(results) == 9,
              "expected nine scored pairs, got " << line_count(results));
}

// ---- criterion 7: optional external reproduction ---------------------------

// Runs only when GREEN_REXVAL_RESULTS and GREEN_REXVAL_ANNOTATIONS point at a
// results.jsonl / annotation CSV pair for the public ReXVal error counts.
void external_reproduction(std::string* note) {
  const char* results_env = std::getenv("GREEN_REXVAL_RESULTS");
  const char* annotations_env = std::getenv("GREEN_REXVAL_ANNOTATIONS");
  if (results_env == nullptr || annotations_env == nullptr) {
    *note = "skipped: GREEN_REXVAL_RESULTS / GREEN_REXVAL_ANNOTATIONS not set";
    return;
  }

  std::vector<GreenResult> results = load_results(results_env);
  std::vector<ExpertAnnotation> annotations =
      load_expert_annotations(annotations_env);

  std::map<std::string, double> score_by_pair;
  for (const GreenResult& r : results) score_by_pair[r.pair_id] = r.score;

  // Rater order of first appearance; per-rater total error counts by pair.
  std::vector<std::string> rater_order;
  std::map<std::string, std::map<std::string, double>> by_rater;
  std::map<std::string, std::vector<double>> totals_by_pair;
  for (const ExpertAnnotation& ann : annotations) {
    if (score_by_pair.find(ann.pair_id) == score_by_pair.end()) continue;
    if (by_rater.find(ann.rater_id) == by_rater.end()) {
      rater_order.push_back(ann.rater_id);
    }
    double total = total_errors(ann);
    by_rater[ann.rater_id][ann.pair_id] = total;
    totals_by_pair[ann.pair_id].push_back(total);
  }
  REQUIRE_MSG(rater_order.size() >= 2, "need at least two raters");

  std::vector<double> scores, expert_means;
  for (const auto& [pair_id, totals] : totals_by_pair) {
    double sum = 0;
    for (double t : totals) sum += t;
    scores.push_back(score_by_pair[pair_id]);
    expert_means.push_back(sum / static_cast<double>(totals.size()));
  }
  CorrelationResult corr = tau_with_ci(scores, expert_means, 1000, 20240521);
  double abs_tau = std::fabs(corr.tau);
  double ci_width = corr.ci_high - corr.ci_low;
  REQUIRE_MSG(std::fabs(abs_tau - 0.64) <= ci_width,
              "|tau| = " << abs_tau << " not within " << ci_width
                         << " of 0.64");

  // First two raters over their shared pairs.
  std::vector<double> first, second;
  for (const auto& [pair_id, total] : by_rater[rater_order[0]]) {
    auto it = by_rater[rater_order[1]].find(pair_id);
    if (it == by_rater[rater_order[1]].end()) continue;
    first.push_back(total);
    second.push_back(it->second);
  }
  MaeResult pair_mae = mae_pair(first, second);
  REQUIRE_MSG(std::fabs(pair_mae.mae - 0.505) <= 1e-9,
              "rater0-vs-rater1 MAE = " << pair_mae.mae);
  std::ostringstream os;
  os << "|tau| = " << abs_tau << ", rater MAE = " << pair_mae.mae;
  *note = os.str();
}

// ---- harness ----------------------------------------------------------------

bool run_criterion(int number, const std::string& label, double budget_seconds,
                   const std::function<void()>& body) {
  auto start = std::chrono::steady_clock::now();
  std::string failure;
  try {
    body();
  } catch (const Failure& f) {
    failure = f.reason;
  } catch (const std::exception& e) {
    failure = e.what();
  }
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (failure.empty() && elapsed > budget_seconds) {
    std::ostringstream os;
    os << "exceeded " << budget_seconds << "s budget";
    failure = os.str();
  }
  if (failure.empty()) {
    std::printf("criterion %d (%s): pass (%.2fs)\n", number, label.c_str(),
                elapsed);
    return true;
  }
  std::printf("criterion %d (%s): FAIL (%.2fs) %s\n", number, label.c_str(),
              elapsed, failure.c_str());
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <path-to-cli-binary>\n");
    return 1;
  }
  g_cli_binary = argv[1];
  g_workspace = fs::temp_directory_path() /
                ("green-acceptance-" + std::to_string(::getpid()));
  std::error_code ec;
  fs::remove_all(g_workspace, ec);
  fs::create_directories(g_workspace);

  bool ok = true;
  ok &= run_criterion(1, "golden parse", 1.0, golden_parse);
  ok &= run_criterion(2, "score law", 5.0, score_law);
  ok &= run_criterion(3, "statistics oracles", 30.0, stats_oracles);
  ok &= run_criterion(4, "summary determinism", 10.0, summary_determinism);
  ok &= run_criterion(5, "synthesis properties", 10.0, synthesis_properties);
  ok &= run_criterion(6, "offline replay", 10.0, offline_replay);

  std::string note;
  bool seven = run_criterion(7, "external reproduction", 600.0,
                             [&note] { external_reproduction(&note); });
  if (!note.empty()) std::printf("  note: %s\n", note.c_str());
  ok &= seven;

  fs::remove_all(g_workspace, ec);
  return ok ? 0 : 1;
}
