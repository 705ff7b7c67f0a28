#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "green/scoring.hpp"
#include "green/taxonomy.hpp"

namespace green {

struct KmeansResult {
  std::vector<int> labels;
  std::vector<std::vector<double>> centroids;
  double inertia = 0.0;
};

struct ClusterSelection {
  int k = 1;
  std::vector<int> labels;
  int chosen_cluster = 0;  // maximal membership, ties to lowest index
  // Sorted by ascending distance to the chosen centroid, display-deduped.
  std::vector<std::string> representatives;
  double silhouette = 0.0;
};

struct SubcategorySummary {
  double rate = 0.0;
  std::vector<std::string> representatives;
  int k = 1;
  double silhouette = 0.0;
  int sentence_count = 0;
};

struct SummaryReport {
  double score_mean = 0.0;
  double score_std = 0.0;  // population std, summary-header convention
  int n = 0;
  int parse_failures = 0;
  std::array<SubcategorySummary, kSubcategoryCount> per_subcategory;
};

// All clinically significant explanation sentences for subcat, corpus order.
std::vector<std::string> collect_explanations(
    const std::vector<GreenResult>& results, ErrorSubcategory subcat);

// Mean over points of (b-a)/max(a,b); Euclidean distances; singleton and
// zero-spread points contribute 0. Throws degenerate_clustering on an empty
// cluster, invalid_argument below 2 clusters or 3 points.
double silhouette_mean(const std::vector<std::vector<double>>& embeddings,
                       const std::vector<int>& labels);

// Lloyd iterations, seeded restarts, best inertia kept. Deterministic.
KmeansResult kmeans(const std::vector<std::vector<double>>& points, int k,
                    uint64_t seed, int restarts = 10);

// n < 4 falls back to k=1 with up-to-3 most frequent sentences (ties by
// first occurrence); otherwise silhouette-selected k over 2..min(10, n-1).
ClusterSelection cluster_and_select(
    const std::vector<std::string>& sentences,
    const std::vector<std::vector<double>>& embeddings, uint64_t seed);

// Fraction of results with a positive significant count for subcat.
double subcategory_rate(const std::vector<GreenResult>& results,
                        ErrorSubcategory subcat);

using EmbedFn = std::function<std::vector<std::vector<double>>(
    const std::vector<std::string>&)>;

SummaryReport build_summary(const std::vector<GreenResult>& results,
                            const EmbedFn& embed, uint64_t seed,
                            int parse_failures = 0);

std::string render_summary(const SummaryReport& report);

std::string summary_to_json(const SummaryReport& report);

}  // namespace green
