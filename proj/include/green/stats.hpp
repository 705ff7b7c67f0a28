#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "green/analysis.hpp"
#include "green/corpus.hpp"

namespace green {

struct BootstrapCi {
  double low = 0.0;
  double high = 0.0;
};

struct CorrelationResult {
  double tau = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  int n = 0;
  int resamples = 0;
  uint64_t seed = 0;
};

struct MaeResult {
  double mae = 0.0;
  double std_sample = 0.0;
  int n = 0;
};

struct MaeMatrix {
  std::vector<std::string> rater_ids;
  // cells[i][j] = mae between rater i and j; diagonal is zero by identity
  // and skipped by renderers and off-diagonal means.
  std::vector<std::vector<MaeResult>> cells;

  double mean_off_diagonal() const;
};

struct WilcoxonResult {
  double w_statistic = 0.0;
  double p_value = 1.0;
  int n_effective = 0;
  bool exact = false;
};

struct WilsonInterval {
  double low = 0.0;
  double high = 0.0;
};

struct PreferenceOutcome {
  double accuracy = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  int n_used = 0;
  int n_ties = 0;
};

struct CurvePoint {
  int cutoff = 0;
  double accuracy = 0.0;
  int n = 0;
};

// Tie-corrected tau-b via sort-and-merge inversion counting, O(n log n).
// Throws length_mismatch; all_tied when either margin is constant.
double kendall_tau(const std::vector<double>& x, const std::vector<double>& y);

// Percentile 95% interval of `statistic` over paired resampling with
// replacement. Seed-deterministic regardless of host parallelism.
BootstrapCi bootstrap_ci(
    const std::vector<double>& x, const std::vector<double>& y,
    const std::function<double(const std::vector<double>&,
                               const std::vector<double>&)>& statistic,
    int resamples, uint64_t seed);

CorrelationResult tau_with_ci(const std::vector<double>& x,
                              const std::vector<double>& y, int resamples,
                              uint64_t seed);

MaeResult mae_pair(const std::vector<double>& a, const std::vector<double>& b);

MaeMatrix mae_matrix(
    const std::vector<std::pair<std::string, std::vector<double>>>& raters);

// Zero differences dropped; midranks on |d| ties; W = min(W+, W-). Exact
// two-sided p by sign enumeration for n_effective <= 12, else normal
// approximation with tie and continuity corrections.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a,
                                    const std::vector<double>& b);

// Fraction of pairs where the model significant count equals the half-up
// rounded mean expert significant count, per subcategory.
std::array<double, kSubcategoryCount> subcategory_accuracy(
    const std::vector<GreenAnalysis>& model,
    const std::vector<std::vector<ExpertAnnotation>>& experts,
    const std::vector<std::string>& pair_ids);

std::array<MaeResult, kSubcategoryCount> subcategory_mae(
    const std::vector<GreenAnalysis>& model,
    const std::vector<std::vector<ExpertAnnotation>>& experts,
    const std::vector<std::string>& pair_ids);

WilsonInterval wilson_interval(int successes, int n,
                               double z = 1.959963984540054);

// Cases with tied metric values are excluded from both numerator and
// denominator and tallied in n_ties. Ordering-only: any strictly monotone
// transform of the scores yields the same outcome.
PreferenceOutcome preference_accuracy(const std::vector<double>& scores1,
                                      const std::vector<double>& scores2,
                                      const std::vector<Choice>& expert_choice,
                                      bool higher_is_better);

// One point per cutoff over cases with confidence >= cutoff; cutoffs with no
// usable cases are omitted.
std::vector<CurvePoint> confidence_stratified_accuracy(
    const std::vector<double>& scores1, const std::vector<double>& scores2,
    const std::vector<Choice>& expert_choice,
    const std::vector<int>& confidence, bool higher_is_better,
    const std::vector<int>& cutoffs);

// LCS F1 over lowercased alphanumeric tokens, beta = 1.
double rouge_l(const std::string& candidate, const std::string& reference);

// BLEU-4: clipped n-gram precisions, 0.1 smoothing on zero numerators,
// brevity penalty exp(1 - r/c) for short candidates.
double bleu(const std::string& candidate, const std::string& reference);

}  // namespace green
