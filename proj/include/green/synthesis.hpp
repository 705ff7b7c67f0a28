#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "green/corpus.hpp"
#include "green/prompting.hpp"

namespace green {

class Gateway;

struct SentenceSplit {
  // sentences[i] followed by separators[i] reproduces the input exactly;
  // the final separator may be empty.
  std::vector<std::string> sentences;
  std::vector<std::string> separators;
};

struct SplitOptions {
  // Treat "A." style single-letter initials as non-terminal.
  bool guard_single_letter = true;
};

SentenceSplit split_sentences(std::string_view report,
                              const SplitOptions& options = {});

std::string rejoin(const SentenceSplit& split);

// Trimmed sentence bodies, empties dropped.
std::vector<std::string> sentence_texts(const SentenceSplit& split);

// Non-identity permutation whenever the sentences admit one. Output joined
// with single spaces. Throws too_few_sentences below 2.
std::string shuffle_sentences(std::string_view report, std::mt19937_64& rng);

// Removes ceil(fraction * n) sentences but always keeps at least one;
// survivors stay in order. Throws too_few_sentences below 2.
std::string drop_sentences(std::string_view report, double drop_fraction,
                           std::mt19937_64& rng);

// Each report paired with a uniformly chosen other report; never itself.
std::vector<ReportPair> random_pairing(const std::vector<std::string>& reports,
                                       std::mt19937_64& rng);

struct MixedReport {
  std::string text;
  std::array<size_t, 2> sources{};       // indices of the two source reports
  std::vector<size_t> provenance;        // source index per output sentence
};

// Candidate assembled by alternating randomly drawn sentences from two
// distinct source reports. Throws too_few_reports below 2.
MixedReport cross_mix_sentences(const std::vector<std::string>& reports,
                                std::mt19937_64& rng);

struct SimilarityMatrix {
  size_t n = 0;
  std::vector<double> values;  // row-major n*n

  double at(size_t i, size_t j) const { return values[i * n + j]; }
};

// Dense rows (n lines of n numbers), or triples with an "i,j,score" header.
SimilarityMatrix load_similarity(const std::filesystem::path& path);

// Row argmax over distinct reports, ties to the lower index. With
// exclusivity, chosen candidates leave the pool; a starved row is skipped.
std::vector<ReportPair> nearest_pairing(
    const std::vector<std::string>& reports,
    const SimilarityMatrix& similarities, bool exclusive);

// Candidate text extracted after the reply's "[Candidate]:" marker.
std::string corrupt_via_backend(std::string_view report,
                                const CorruptionSpec& spec, Gateway& gateway,
                                const TemplateLibrary& templates,
                                const std::string& replay_key);

struct CorpusSplit {
  std::vector<ReportPair> train;
  std::vector<ReportPair> val;
  std::vector<ReportPair> test;
};

// Seeded shuffle, then 80/10/10 by floor(0.8n)/floor(0.1n)/rest.
CorpusSplit split_80_10_10(const std::vector<ReportPair>& pairs,
                           uint64_t seed);

}  // namespace green
