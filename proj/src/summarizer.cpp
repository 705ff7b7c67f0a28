#include "green/summarizer.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "green/errors.hpp"
#include "green/util/rng.hpp"

namespace green {

namespace {

double squared_distance(const std::vector<double>& a,
                        const std::vector<double>& b) {
  double total = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    total += d * d;
  }
  return total;
}

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  return std::sqrt(squared_distance(a, b));
}

int nearest_centroid(const std::vector<double>& point,
                     const std::vector<std::vector<double>>& centroids) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (size_t c = 0; c < centroids.size(); ++c) {
    double d = squared_distance(point, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  return best;
}

// Two decimals with one trailing zero trimmed: 0.90 -> 0.9, 1.00 -> 1.0,
// 0.45 unchanged. Matches the summary layout's mixed precision.
std::string format_rate(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", rate);
  std::string out(buf);
  if (out.size() >= 2 && out.back() == '0' && out[out.size() - 2] != '.') {
    out.pop_back();
  }
  return out;
}

}  // namespace

std::vector<std::string> collect_explanations(
    const std::vector<GreenResult>& results, ErrorSubcategory subcat) {
  std::vector<std::string> sentences;
  for (const auto& result : results) {
    const auto& finding = result.analysis.sig[subcategory_index(subcat)];
    sentences.insert(sentences.end(), finding.explanations.begin(),
                     finding.explanations.end());
  }
  return sentences;
}

double silhouette_mean(const std::vector<std::vector<double>>& embeddings,
                       const std::vector<int>& labels) {
  if (embeddings.size() != labels.size()) {
    fail(Errc::length_mismatch, "embeddings vs labels");
  }
  size_t n = embeddings.size();
  if (n < 3) fail(Errc::invalid_argument, "silhouette needs >= 3 points");
  int k = 0;
  for (int label : labels) k = std::max(k, label + 1);
  if (k < 2) fail(Errc::invalid_argument, "silhouette needs >= 2 clusters");
  std::vector<int> sizes(static_cast<size_t>(k), 0);
  for (int label : labels) {
    if (label < 0) fail(Errc::invalid_argument, "negative label");
    ++sizes[static_cast<size_t>(label)];
  }
  for (int size : sizes) {
    if (size == 0) fail(Errc::degenerate_clustering, "empty cluster");
  }

  double total = 0.0;
  for (size_t i = 0; i < n; ++i) {
    int own = labels[i];
    if (sizes[static_cast<size_t>(own)] == 1) continue;  // contributes 0
    std::vector<double> sums(static_cast<size_t>(k), 0.0);
    for (size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      sums[static_cast<size_t>(labels[j])] += distance(embeddings[i],
                                                       embeddings[j]);
    }
    double a = sums[static_cast<size_t>(own)] /
               static_cast<double>(sizes[static_cast<size_t>(own)] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      if (c == own) continue;
      b = std::min(b, sums[static_cast<size_t>(c)] /
                          static_cast<double>(sizes[static_cast<size_t>(c)]));
    }
    double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

KmeansResult kmeans(const std::vector<std::vector<double>>& points, int k,
                    uint64_t seed, int restarts) {
  size_t n = points.size();
  if (k < 1 || static_cast<size_t>(k) > n) {
    fail(Errc::invalid_argument, "kmeans k out of range");
  }
  KmeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < restarts; ++restart) {
    std::mt19937_64 rng(util::derive_seed(seed, static_cast<uint64_t>(restart)));
    auto init = util::sample_indices(rng, n, static_cast<size_t>(k));
    std::vector<std::vector<double>> centroids;
    centroids.reserve(static_cast<size_t>(k));
    for (size_t idx : init) centroids.push_back(points[idx]);

    std::vector<int> labels(n, -1);
    for (int iter = 0; iter < 100; ++iter) {
      bool changed = false;
      for (size_t i = 0; i < n; ++i) {
        int nearest = nearest_centroid(points[i], centroids);
        if (nearest != labels[i]) {
          labels[i] = nearest;
          changed = true;
        }
      }
      std::vector<std::vector<double>> next(
          static_cast<size_t>(k),
          std::vector<double>(points[0].size(), 0.0));
      std::vector<int> counts(static_cast<size_t>(k), 0);
      for (size_t i = 0; i < n; ++i) {
        auto c = static_cast<size_t>(labels[i]);
        ++counts[c];
        for (size_t d = 0; d < points[i].size(); ++d) {
          next[c][d] += points[i][d];
        }
      }
      for (int c = 0; c < k; ++c) {
        auto cc = static_cast<size_t>(c);
        if (counts[cc] == 0) {
          // Re-seed an empty cluster with the point farthest from its
          // current centroid.
          size_t far = 0;
          double far_d = -1.0;
          for (size_t i = 0; i < n; ++i) {
            double d = squared_distance(
                points[i], centroids[static_cast<size_t>(labels[i])]);
            if (d > far_d) {
              far_d = d;
              far = i;
            }
          }
          next[cc] = points[far];
          labels[far] = c;
          changed = true;
        } else {
          for (double& value : next[cc]) {
            value /= static_cast<double>(counts[cc]);
          }
        }
      }
      centroids = std::move(next);
      if (!changed) break;
    }

    double inertia = 0.0;
    for (size_t i = 0; i < n; ++i) {
      inertia += squared_distance(points[i],
                                  centroids[static_cast<size_t>(labels[i])]);
    }
    if (inertia < best.inertia) {
      best.labels = labels;
      best.centroids = centroids;
      best.inertia = inertia;
    }
  }
  return best;
}

ClusterSelection cluster_and_select(
    const std::vector<std::string>& sentences,
    const std::vector<std::vector<double>>& embeddings, uint64_t seed) {
  if (sentences.size() != embeddings.size()) {
    fail(Errc::length_mismatch, "sentences vs embeddings");
  }
  ClusterSelection selection;
  size_t n = sentences.size();
  if (n == 0) return selection;

  if (n < 4) {
    // Too few points to cluster: fall back to frequency.
    selection.k = 1;
    selection.labels.assign(n, 0);
    std::map<std::string, std::pair<int, size_t>> counts;  // count, first idx
    for (size_t i = 0; i < n; ++i) {
      auto [it, inserted] = counts.try_emplace(sentences[i], 0, i);
      ++it->second.first;
    }
    std::vector<std::pair<std::string, std::pair<int, size_t>>> ranked(
        counts.begin(), counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.second.first != b.second.first) {
        return a.second.first > b.second.first;
      }
      return a.second.second < b.second.second;
    });
    for (size_t i = 0; i < ranked.size() && i < 3; ++i) {
      selection.representatives.push_back(ranked[i].first);
    }
    return selection;
  }

  int max_k = static_cast<int>(std::min<size_t>(10, n - 1));
  KmeansResult best_km;
  double best_sil = -std::numeric_limits<double>::infinity();
  int best_k = 2;
  for (int k = 2; k <= max_k; ++k) {
    KmeansResult km =
        kmeans(embeddings, k, util::derive_seed(seed, 1000 + k));
    double sil = silhouette_mean(embeddings, km.labels);
    if (sil > best_sil) {
      best_sil = sil;
      best_km = std::move(km);
      best_k = k;
    }
  }
  selection.k = best_k;
  selection.labels = best_km.labels;
  selection.silhouette = best_sil;

  std::vector<int> sizes(static_cast<size_t>(best_k), 0);
  for (int label : selection.labels) ++sizes[static_cast<size_t>(label)];
  int chosen = 0;
  for (int c = 1; c < best_k; ++c) {
    if (sizes[static_cast<size_t>(c)] > sizes[static_cast<size_t>(chosen)]) {
      chosen = c;
    }
  }
  selection.chosen_cluster = chosen;

  const auto& centroid = best_km.centroids[static_cast<size_t>(chosen)];
  std::vector<std::pair<double, size_t>> members;
  for (size_t i = 0; i < n; ++i) {
    if (selection.labels[i] == chosen) {
      members.emplace_back(distance(embeddings[i], centroid), i);
    }
  }
  std::sort(members.begin(), members.end());
  // Three nearest members, then display-dedup preserving rank.
  std::vector<std::string> nearest;
  for (size_t i = 0; i < members.size() && i < 3; ++i) {
    nearest.push_back(sentences[members[i].second]);
  }
  for (const auto& sentence : nearest) {
    if (std::find(selection.representatives.begin(),
                  selection.representatives.end(),
                  sentence) == selection.representatives.end()) {
      selection.representatives.push_back(sentence);
    }
  }
  return selection;
}

double subcategory_rate(const std::vector<GreenResult>& results,
                        ErrorSubcategory subcat) {
  if (results.empty()) fail(Errc::empty_input, "no results");
  int hits = 0;
  for (const auto& result : results) {
    if (result.analysis.sig[subcategory_index(subcat)].count > 0) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(results.size());
}

SummaryReport build_summary(const std::vector<GreenResult>& results,
                            const EmbedFn& embed, uint64_t seed,
                            int parse_failures) {
  SummaryReport report;
  ScoreAggregate agg = aggregate(results, parse_failures);
  report.score_mean = agg.mean;
  report.score_std = agg.std_population;
  report.n = agg.n;
  report.parse_failures = parse_failures;
  for (auto subcat : all_subcategories()) {
    int idx = subcategory_index(subcat);
    auto& summary = report.per_subcategory[static_cast<size_t>(idx)];
    summary.rate = subcategory_rate(results, subcat);
    auto sentences = collect_explanations(results, subcat);
    summary.sentence_count = static_cast<int>(sentences.size());
    if (sentences.empty()) continue;
    auto embeddings = embed(sentences);
    auto selection = cluster_and_select(
        sentences, embeddings,
        util::derive_seed(seed, 100 + static_cast<uint64_t>(idx)));
    summary.representatives = selection.representatives;
    summary.k = selection.k;
    summary.silhouette = selection.silhouette;
  }
  return report;
}

std::string render_summary(const SummaryReport& report) {
  char header[96];
  std::snprintf(header, sizeof(header), "Green score: mean %.2f std %.2f",
                report.score_mean, report.score_std);
  std::string out = "[Summary]:\n";
  out += header;
  out += "\n\n[Clinically Significant Errors]:\n";
  for (auto subcat : all_subcategories()) {
    const auto& summary =
        report.per_subcategory[static_cast<size_t>(subcategory_index(subcat))];
    out += "\n(";
    out += subcategory_letter(subcat);
    out += ") ";
    out += subcategory_description(subcat);
    out += ": ";
    out += format_rate(summary.rate);
    out += "\n";
    if (summary.representatives.empty()) {
      out += "[none]\n";
    } else {
      for (const auto& rep : summary.representatives) {
        out += "[" + rep + "]\n";
      }
    }
  }
  return out;
}

std::string summary_to_json(const SummaryReport& report) {
  nlohmann::ordered_json root;
  root["score"] = {{"mean", report.score_mean},
                   {"std_population", report.score_std},
                   {"n", report.n},
                   {"parse_failures", report.parse_failures}};
  nlohmann::ordered_json subcats;
  for (auto subcat : all_subcategories()) {
    const auto& summary =
        report.per_subcategory[static_cast<size_t>(subcategory_index(subcat))];
    nlohmann::ordered_json entry;
    entry["description"] = std::string(subcategory_description(subcat));
    entry["rate"] = summary.rate;
    entry["representatives"] = summary.representatives;
    entry["k"] = summary.k;
    entry["silhouette"] = summary.silhouette;
    entry["sentences"] = summary.sentence_count;
    subcats[std::string(1, subcategory_letter(subcat))] = std::move(entry);
  }
  root["subcategories"] = std::move(subcats);
  return root.dump(2) + "\n";
}

}  // namespace green
