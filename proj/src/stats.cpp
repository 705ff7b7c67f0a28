#include "green/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "green/errors.hpp"
#include "green/util/rng.hpp"
#include "green/util/text.hpp"

namespace green {

namespace {

void require_same_length(size_t a, size_t b) {
  if (a != b) {
    fail(Errc::length_mismatch,
         std::to_string(a) + " vs " + std::to_string(b));
  }
}

// Tied-pair count sum over groups of equal keys: sum t(t-1)/2.
template <typename It, typename Eq>
double tied_pairs(It begin, It end, Eq eq) {
  double total = 0.0;
  auto group = begin;
  while (group != end) {
    auto next = group + 1;
    while (next != end && eq(*group, *next)) ++next;
    double t = static_cast<double>(next - group);
    total += t * (t - 1.0) / 2.0;
    group = next;
  }
  return total;
}

// Inversions with respect to strict descending order (equal values are not
// inversions), counted during a merge sort.
uint64_t count_inversions(std::vector<double>& values,
                          std::vector<double>& scratch, size_t lo,
                          size_t hi) {
  if (hi - lo < 2) return 0;
  size_t mid = lo + (hi - lo) / 2;
  uint64_t inversions = count_inversions(values, scratch, lo, mid) +
                        count_inversions(values, scratch, mid, hi);
  size_t left = lo, right = mid, out = lo;
  while (left < mid && right < hi) {
    if (values[right] < values[left]) {
      inversions += mid - left;
      scratch[out++] = values[right++];
    } else {
      scratch[out++] = values[left++];
    }
  }
  while (left < mid) scratch[out++] = values[left++];
  while (right < hi) scratch[out++] = values[right++];
  std::copy(scratch.begin() + static_cast<long>(lo),
            scratch.begin() + static_cast<long>(hi),
            values.begin() + static_cast<long>(lo));
  return inversions;
}

std::vector<double> midranks(const std::vector<double>& values) {
  size_t n = values.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) /
                  2.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double normal_two_sided_p(double z) {
  // 2 * Phi(z) for z <= 0; callers pass the deficit side.
  return std::erfc(-z / std::sqrt(2.0));
}

int half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

std::vector<std::string> tokens_of(const std::string& text) {
  return util::word_tokens(text);
}

}  // namespace

double MaeMatrix::mean_off_diagonal() const {
  double sum = 0.0;
  int count = 0;
  for (size_t i = 0; i < cells.size(); ++i) {
    for (size_t j = i + 1; j < cells[i].size(); ++j) {
      sum += cells[i][j].mae;
      ++count;
    }
  }
  return count > 0 ? sum / count : 0.0;
}

double kendall_tau(const std::vector<double>& x,
                   const std::vector<double>& y) {
  require_same_length(x.size(), y.size());
  size_t n = x.size();
  if (n < 2) fail(Errc::invalid_argument, "kendall_tau needs n >= 2");

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return y[a] < y[b];
  });

  std::vector<std::pair<double, double>> sorted(n);
  for (size_t i = 0; i < n; ++i) sorted[i] = {x[order[i]], y[order[i]]};

  double n0 = static_cast<double>(n) * (static_cast<double>(n) - 1.0) / 2.0;
  double tx = tied_pairs(sorted.begin(), sorted.end(),
                         [](const auto& a, const auto& b) {
                           return a.first == b.first;
                         });
  double txy = tied_pairs(sorted.begin(), sorted.end(),
                          [](const auto& a, const auto& b) {
                            return a.first == b.first &&
                                   a.second == b.second;
                          });

  std::vector<double> ys(n);
  for (size_t i = 0; i < n; ++i) ys[i] = sorted[i].second;
  std::vector<double> scratch(n);
  uint64_t swaps = count_inversions(ys, scratch, 0, n);
  // ys is now fully sorted; tally y ties from it.
  double ty = tied_pairs(ys.begin(), ys.end(),
                         [](double a, double b) { return a == b; });

  double denom_x = n0 - tx;
  double denom_y = n0 - ty;
  if (denom_x <= 0.0 || denom_y <= 0.0) {
    fail(Errc::all_tied, "tau undefined for a constant margin");
  }
  double numerator =
      n0 - tx - ty + txy - 2.0 * static_cast<double>(swaps);
  return numerator / std::sqrt(denom_x * denom_y);
}

BootstrapCi bootstrap_ci(
    const std::vector<double>& x, const std::vector<double>& y,
    const std::function<double(const std::vector<double>&,
                               const std::vector<double>&)>& statistic,
    int resamples, uint64_t seed) {
  require_same_length(x.size(), y.size());
  size_t n = x.size();
  if (n < 2) fail(Errc::invalid_argument, "bootstrap needs n >= 2");
  if (resamples < 100) {
    fail(Errc::invalid_argument, "bootstrap needs >= 100 resamples");
  }
  std::mt19937_64 rng(seed);
  std::vector<double> stats(static_cast<size_t>(resamples));
  std::vector<double> xs(n), ys(n);
  for (int b = 0; b < resamples; ++b) {
    for (size_t i = 0; i < n; ++i) {
      auto j = static_cast<size_t>(util::uniform_index(rng, n));
      xs[i] = x[j];
      ys[i] = y[j];
    }
    stats[static_cast<size_t>(b)] = statistic(xs, ys);
  }
  std::sort(stats.begin(), stats.end());
  auto percentile = [&](double p) {
    double h = (static_cast<double>(stats.size()) - 1.0) * p;
    auto lo = static_cast<size_t>(std::floor(h));
    auto hi = static_cast<size_t>(std::ceil(h));
    double w = h - std::floor(h);
    return stats[lo] * (1.0 - w) + stats[hi] * w;
  };
  return {percentile(0.025), percentile(0.975)};
}

CorrelationResult tau_with_ci(const std::vector<double>& x,
                              const std::vector<double>& y, int resamples,
                              uint64_t seed) {
  CorrelationResult result;
  result.tau = kendall_tau(x, y);
  auto ci = bootstrap_ci(
      x, y,
      [](const std::vector<double>& a, const std::vector<double>& b) {
        return kendall_tau(a, b);
      },
      resamples, seed);
  result.ci_low = ci.low;
  result.ci_high = ci.high;
  result.n = static_cast<int>(x.size());
  result.resamples = resamples;
  result.seed = seed;
  return result;
}

MaeResult mae_pair(const std::vector<double>& a,
                   const std::vector<double>& b) {
  require_same_length(a.size(), b.size());
  if (a.empty()) fail(Errc::empty_input, "mae over empty lists");
  MaeResult result;
  result.n = static_cast<int>(a.size());
  std::vector<double> diffs(a.size());
  for (size_t i = 0; i < a.size(); ++i) diffs[i] = std::fabs(a[i] - b[i]);
  double sum = std::accumulate(diffs.begin(), diffs.end(), 0.0);
  result.mae = sum / static_cast<double>(diffs.size());
  if (diffs.size() > 1) {
    double ss = 0.0;
    for (double d : diffs) ss += (d - result.mae) * (d - result.mae);
    result.std_sample = std::sqrt(ss / (static_cast<double>(diffs.size()) - 1.0));
  }
  return result;
}

MaeMatrix mae_matrix(
    const std::vector<std::pair<std::string, std::vector<double>>>& raters) {
  MaeMatrix matrix;
  size_t n = raters.size();
  matrix.rater_ids.reserve(n);
  for (const auto& [id, values] : raters) {
    matrix.rater_ids.push_back(id);
    require_same_length(raters.front().second.size(), values.size());
  }
  matrix.cells.assign(n, std::vector<MaeResult>(n));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      MaeResult cell = mae_pair(raters[i].second, raters[j].second);
      matrix.cells[i][j] = cell;
      matrix.cells[j][i] = cell;
    }
    matrix.cells[i][i].n = static_cast<int>(raters[i].second.size());
  }
  return matrix;
}

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a,
                                    const std::vector<double>& b) {
  require_same_length(a.size(), b.size());
  std::vector<double> diffs;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    if (d != 0.0) diffs.push_back(d);
  }
  if (diffs.empty()) {
    fail(Errc::all_zero_differences, "wilcoxon needs a nonzero difference");
  }
  size_t n = diffs.size();
  std::vector<double> abs_diffs(n);
  for (size_t i = 0; i < n; ++i) abs_diffs[i] = std::fabs(diffs[i]);
  std::vector<double> ranks = midranks(abs_diffs);

  double w_plus = 0.0, w_minus = 0.0;
  for (size_t i = 0; i < n; ++i) {
    (diffs[i] > 0 ? w_plus : w_minus) += ranks[i];
  }
  WilcoxonResult result;
  result.n_effective = static_cast<int>(n);
  result.w_statistic = std::min(w_plus, w_minus);

  if (n <= 12) {
    result.exact = true;
    // All 2^n sign assignments are equally likely under H0.
    uint64_t total = uint64_t{1} << n;
    uint64_t le = 0, ge = 0;
    for (uint64_t mask = 0; mask < total; ++mask) {
      double w = 0.0;
      for (size_t i = 0; i < n; ++i) {
        if (mask & (uint64_t{1} << i)) w += ranks[i];
      }
      if (w <= w_plus + 1e-9) ++le;
      if (w >= w_plus - 1e-9) ++ge;
    }
    double p_le = static_cast<double>(le) / static_cast<double>(total);
    double p_ge = static_cast<double>(ge) / static_cast<double>(total);
    result.p_value = std::min(1.0, 2.0 * std::min(p_le, p_ge));
    return result;
  }

  result.exact = false;
  double dn = static_cast<double>(n);
  double mean = dn * (dn + 1.0) / 4.0;
  double var = dn * (dn + 1.0) * (2.0 * dn + 1.0) / 24.0;
  // Midrank ties shrink the variance.
  std::map<double, int> tie_groups;
  for (double v : abs_diffs) ++tie_groups[v];
  for (const auto& [value, t] : tie_groups) {
    double td = t;
    var -= (td * td * td - td) / 48.0;
  }
  double sd = std::sqrt(var);
  // Continuity correction pulls W toward the mean by half a rank step.
  double z = (result.w_statistic - mean + 0.5) / sd;
  result.p_value = std::min(1.0, normal_two_sided_p(z));
  return result;
}

std::array<double, kSubcategoryCount> subcategory_accuracy(
    const std::vector<GreenAnalysis>& model,
    const std::vector<std::vector<ExpertAnnotation>>& experts,
    const std::vector<std::string>& pair_ids) {
  require_same_length(model.size(), experts.size());
  require_same_length(model.size(), pair_ids.size());
  if (model.empty()) fail(Errc::empty_input, "no pairs");
  std::array<double, kSubcategoryCount> accuracy{};
  for (size_t i = 0; i < model.size(); ++i) {
    if (experts[i].empty()) fail(Errc::missing_annotation, pair_ids[i]);
    for (auto subcat : all_subcategories()) {
      int idx = subcategory_index(subcat);
      double expert_sum = 0.0;
      for (const auto& annotation : experts[i]) {
        expert_sum += annotation.sig_counts[idx];
      }
      int rounded = half_up(expert_sum / static_cast<double>(experts[i].size()));
      if (model[i].sig[idx].count == rounded) accuracy[idx] += 1.0;
    }
  }
  for (auto& value : accuracy) value /= static_cast<double>(model.size());
  return accuracy;
}

std::array<MaeResult, kSubcategoryCount> subcategory_mae(
    const std::vector<GreenAnalysis>& model,
    const std::vector<std::vector<ExpertAnnotation>>& experts,
    const std::vector<std::string>& pair_ids) {
  require_same_length(model.size(), experts.size());
  require_same_length(model.size(), pair_ids.size());
  if (model.empty()) fail(Errc::empty_input, "no pairs");
  std::array<MaeResult, kSubcategoryCount> out{};
  for (auto subcat : all_subcategories()) {
    int idx = subcategory_index(subcat);
    std::vector<double> model_counts, expert_means;
    for (size_t i = 0; i < model.size(); ++i) {
      if (experts[i].empty()) fail(Errc::missing_annotation, pair_ids[i]);
      double expert_sum = 0.0;
      for (const auto& annotation : experts[i]) {
        expert_sum += annotation.sig_counts[idx];
      }
      model_counts.push_back(model[i].sig[idx].count);
      expert_means.push_back(expert_sum /
                             static_cast<double>(experts[i].size()));
    }
    out[idx] = mae_pair(model_counts, expert_means);
  }
  return out;
}

WilsonInterval wilson_interval(int successes, int n, double z) {
  if (n <= 0) fail(Errc::empty_input, "wilson interval needs n >= 1");
  double p = static_cast<double>(successes) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (p + z2 / (2.0 * n)) / denom;
  double half = z *
                std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

PreferenceOutcome preference_accuracy(const std::vector<double>& scores1,
                                      const std::vector<double>& scores2,
                                      const std::vector<Choice>& expert_choice,
                                      bool higher_is_better) {
  require_same_length(scores1.size(), scores2.size());
  require_same_length(scores1.size(), expert_choice.size());
  if (scores1.empty()) fail(Errc::empty_input, "no preference cases");
  int correct = 0, used = 0, ties = 0;
  for (size_t i = 0; i < scores1.size(); ++i) {
    if (scores1[i] == scores2[i]) {
      ++ties;
      continue;
    }
    bool first_wins = (scores1[i] > scores2[i]) == higher_is_better;
    Choice predicted = first_wins ? Choice::candidate1 : Choice::candidate2;
    if (predicted == expert_choice[i]) ++correct;
    ++used;
  }
  if (used == 0) fail(Errc::empty_input, "all metric values tied");
  PreferenceOutcome outcome;
  outcome.accuracy = static_cast<double>(correct) / used;
  auto ci = wilson_interval(correct, used);
  outcome.ci_low = ci.low;
  outcome.ci_high = ci.high;
  outcome.n_used = used;
  outcome.n_ties = ties;
  return outcome;
}

std::vector<CurvePoint> confidence_stratified_accuracy(
    const std::vector<double>& scores1, const std::vector<double>& scores2,
    const std::vector<Choice>& expert_choice,
    const std::vector<int>& confidence, bool higher_is_better,
    const std::vector<int>& cutoffs) {
  require_same_length(scores1.size(), confidence.size());
  std::vector<CurvePoint> curve;
  for (int cutoff : cutoffs) {
    std::vector<double> s1, s2;
    std::vector<Choice> choices;
    for (size_t i = 0; i < scores1.size(); ++i) {
      if (confidence[i] >= cutoff) {
        s1.push_back(scores1[i]);
        s2.push_back(scores2[i]);
        choices.push_back(expert_choice[i]);
      }
    }
    if (s1.empty()) continue;
    try {
      auto outcome = preference_accuracy(s1, s2, choices, higher_is_better);
      curve.push_back({cutoff, outcome.accuracy, outcome.n_used});
    } catch (const Error& e) {
      if (e.code() != Errc::empty_input) throw;
      // Every remaining case tied: nothing to plot at this cutoff.
    }
  }
  return curve;
}

double rouge_l(const std::string& candidate, const std::string& reference) {
  auto cand = tokens_of(candidate);
  auto ref = tokens_of(reference);
  if (cand.empty() || ref.empty()) return 0.0;
  size_t rows = cand.size(), cols = ref.size();
  std::vector<size_t> prev(cols + 1, 0), curr(cols + 1, 0);
  for (size_t i = 1; i <= rows; ++i) {
    for (size_t j = 1; j <= cols; ++j) {
      if (cand[i - 1] == ref[j - 1]) {
        curr[j] = prev[j - 1] + 1;
      } else {
        curr[j] = std::max(prev[j], curr[j - 1]);
      }
    }
    std::swap(prev, curr);
  }
  double lcs = static_cast<double>(prev[cols]);
  if (lcs == 0.0) return 0.0;
  double precision = lcs / static_cast<double>(cand.size());
  double recall = lcs / static_cast<double>(ref.size());
  return 2.0 * precision * recall / (precision + recall);
}

double bleu(const std::string& candidate, const std::string& reference) {
  auto cand = tokens_of(candidate);
  auto ref = tokens_of(reference);
  if (cand.empty()) return 0.0;
  double log_sum = 0.0;
  for (size_t order = 1; order <= 4; ++order) {
    std::map<std::vector<std::string>, int> ref_grams;
    if (ref.size() >= order) {
      for (size_t i = 0; i + order <= ref.size(); ++i) {
        std::vector<std::string> gram(ref.begin() + static_cast<long>(i),
                                      ref.begin() + static_cast<long>(i + order));
        ++ref_grams[gram];
      }
    }
    double matches = 0.0;
    size_t total = cand.size() >= order ? cand.size() - order + 1 : 0;
    std::map<std::vector<std::string>, int> used;
    for (size_t i = 0; i + order <= cand.size(); ++i) {
      std::vector<std::string> gram(cand.begin() + static_cast<long>(i),
                                    cand.begin() + static_cast<long>(i + order));
      auto it = ref_grams.find(gram);
      if (it != ref_grams.end() && used[gram] < it->second) {
        ++used[gram];
        matches += 1.0;
      }
    }
    if (matches == 0.0) matches = 0.1;  // epsilon smoothing
    double precision = matches / static_cast<double>(std::max<size_t>(total, 1));
    log_sum += 0.25 * std::log(precision);
  }
  double bp = 1.0;
  if (cand.size() < ref.size()) {
    bp = std::exp(1.0 - static_cast<double>(ref.size()) /
                            static_cast<double>(cand.size()));
  }
  return bp * std::exp(log_sum);
}

}  // namespace green
