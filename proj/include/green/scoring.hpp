#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "green/analysis.hpp"

namespace green {

struct GreenResult {
  std::string pair_id;
  GreenAnalysis analysis;
  double score = 0.0;
  std::string fingerprint;  // raw-response fingerprint from the gateway
};

struct ScoreAggregate {
  double mean = 0.0;
  double std_population = 0.0;  // divide by n (summary header convention)
  double std_sample = 0.0;      // divide by n-1, 0 when n == 1
  int n = 0;
  int parse_failures = 0;  // reported, never imputed as score 0
};

// matched / (matched + significant total) when matched > 0, else 0.
// Insignificant errors never touch the score.
double green_score(const GreenAnalysis& analysis);

int significant_error_count(const GreenAnalysis& analysis);
int total_error_count(const GreenAnalysis& analysis);

GreenResult make_result(std::string pair_id, GreenAnalysis analysis,
                        std::string fingerprint);

// Throws Error(empty_input) when results is empty.
ScoreAggregate aggregate(const std::vector<GreenResult>& results,
                         int parse_failures = 0);

// JSONL record per pair: pair_id, score, per-subcategory counts and
// explanations, matched findings, fingerprint. Stable key order.
std::string results_to_jsonl(const std::vector<GreenResult>& results);
void write_results(const std::vector<GreenResult>& results,
                   const std::filesystem::path& path);
std::vector<GreenResult> load_results(const std::filesystem::path& path);

}  // namespace green
