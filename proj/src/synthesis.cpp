#include "green/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "green/errors.hpp"
#include "green/gateway.hpp"
#include "green/util/io.hpp"
#include "green/util/rng.hpp"
#include "green/util/text.hpp"

namespace green {

namespace {

// Sentence-final period suppressed after these tokens. Deliberately short:
// only forms that appear mid-sentence in report prose.
const std::set<std::string>& abbreviation_guards() {
  static const std::set<std::string> guards = {
      "dr.", "mr.", "mrs.", "ms.", "prof.", "drs.", "e.g.",
      "i.e.", "vs.",  "cf.",  "fig.", "approx.", "st."};
  return guards;
}

bool is_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9');
}

bool guarded_period(std::string_view text, size_t i,
                    const SplitOptions& options) {
  size_t word_start = i;
  while (word_start > 0 && !util::is_space(text[word_start - 1])) {
    --word_start;
  }
  std::string_view word = text.substr(word_start, i - word_start + 1);
  while (word.size() > 1 && !is_alnum(word.front())) word.remove_prefix(1);
  std::string lowered = util::to_lower(word);
  if (abbreviation_guards().count(lowered)) return true;
  if (options.guard_single_letter && lowered.size() == 2 &&
      lowered[0] >= 'a' && lowered[0] <= 'z' && lowered[1] == '.') {
    return true;
  }
  return false;
}

std::string format_index_id(const char* prefix, size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s-%06zu", prefix, i);
  return buf;
}

std::vector<std::string> split_texts_checked(std::string_view report,
                                             size_t minimum) {
  auto texts = sentence_texts(split_sentences(report));
  if (texts.size() < minimum) {
    fail(Errc::too_few_sentences,
         "need >= " + std::to_string(minimum) + " sentences, have " +
             std::to_string(texts.size()));
  }
  return texts;
}

}  // namespace

SentenceSplit split_sentences(std::string_view report,
                              const SplitOptions& options) {
  SentenceSplit out;
  size_t n = report.size();
  size_t sentence_start = 0;
  size_t i = 0;
  while (i < n) {
    char c = report[i];
    if (c == '.' || c == '!' || c == '?') {
      size_t ws_end = i + 1;
      while (ws_end < n && util::is_space(report[ws_end])) ++ws_end;
      bool boundary = ws_end > i + 1;
      if (boundary && c == '.' && guarded_period(report, i, options)) {
        boundary = false;
      }
      if (boundary) {
        out.sentences.emplace_back(
            report.substr(sentence_start, i + 1 - sentence_start));
        out.separators.emplace_back(report.substr(i + 1, ws_end - (i + 1)));
        sentence_start = ws_end;
        i = ws_end;
        continue;
      }
    }
    ++i;
  }
  if (sentence_start < n) {
    out.sentences.emplace_back(report.substr(sentence_start));
    out.separators.emplace_back("");
  }
  return out;
}

std::string rejoin(const SentenceSplit& split) {
  std::string out;
  for (size_t i = 0; i < split.sentences.size(); ++i) {
    out += split.sentences[i];
    out += split.separators[i];
  }
  return out;
}

std::vector<std::string> sentence_texts(const SentenceSplit& split) {
  std::vector<std::string> texts;
  for (const auto& sentence : split.sentences) {
    auto t = util::trim(sentence);
    if (!t.empty()) texts.emplace_back(t);
  }
  return texts;
}

std::string shuffle_sentences(std::string_view report, std::mt19937_64& rng) {
  auto texts = split_texts_checked(report, 2);
  bool reorderable = false;
  for (size_t i = 1; i < texts.size(); ++i) {
    if (texts[i] != texts[0]) {
      reorderable = true;
      break;
    }
  }
  std::vector<std::string> shuffled = texts;
  util::shuffle(shuffled, rng);
  while (reorderable && shuffled == texts) {
    util::shuffle(shuffled, rng);
  }
  return util::join(shuffled, " ");
}

std::string drop_sentences(std::string_view report, double drop_fraction,
                           std::mt19937_64& rng) {
  if (drop_fraction <= 0.0 || drop_fraction >= 1.0) {
    fail(Errc::invalid_argument, "drop_fraction must lie in (0,1)");
  }
  auto texts = split_texts_checked(report, 2);
  size_t n = texts.size();
  auto k = static_cast<size_t>(
      std::ceil(drop_fraction * static_cast<double>(n)));
  if (k >= n) k = n - 1;  // always keep at least one sentence
  auto removed = util::sample_indices(rng, n, k);
  std::vector<std::string> kept;
  size_t r = 0;
  for (size_t i = 0; i < n; ++i) {
    if (r < removed.size() && removed[r] == i) {
      ++r;
      continue;
    }
    kept.push_back(texts[i]);
  }
  return util::join(kept, " ");
}

std::vector<ReportPair> random_pairing(const std::vector<std::string>& reports,
                                       std::mt19937_64& rng) {
  size_t n = reports.size();
  if (n < 2) fail(Errc::too_few_reports, "random pairing needs >= 2 reports");
  std::vector<ReportPair> pairs;
  pairs.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    auto j = static_cast<size_t>(util::uniform_index(rng, n - 1));
    if (j >= i) ++j;  // skip self
    pairs.push_back({format_index_id("rand", i), reports[i], reports[j],
                     "random_pair"});
  }
  return pairs;
}

MixedReport cross_mix_sentences(const std::vector<std::string>& reports,
                                std::mt19937_64& rng) {
  size_t n = reports.size();
  if (n < 2) fail(Errc::too_few_reports, "cross mix needs >= 2 reports");
  auto first = static_cast<size_t>(util::uniform_index(rng, n));
  auto second = static_cast<size_t>(util::uniform_index(rng, n - 1));
  if (second >= first) ++second;

  std::array<std::vector<std::string>, 2> pools = {
      split_texts_checked(reports[first], 1),
      split_texts_checked(reports[second], 1)};
  std::array<size_t, 2> source_index = {first, second};

  size_t total = pools[0].size() + pools[1].size();
  auto count = 2 + static_cast<size_t>(util::uniform_index(rng, total - 1));

  MixedReport mixed;
  mixed.sources = source_index;
  std::vector<std::string> sentences;
  // Alternate sources so both always contribute; draw uniformly without
  // replacement within each source.
  auto cursor = static_cast<size_t>(util::uniform_index(rng, 2));
  for (size_t step = 0; step < count; ++step) {
    if (pools[cursor].empty()) cursor ^= 1;
    auto& pool = pools[cursor];
    auto pick = static_cast<size_t>(util::uniform_index(rng, pool.size()));
    sentences.push_back(pool[pick]);
    mixed.provenance.push_back(source_index[cursor]);
    pool.erase(pool.begin() + static_cast<long>(pick));
    cursor ^= 1;
  }
  mixed.text = util::join(sentences, " ");
  return mixed;
}

SimilarityMatrix load_similarity(const std::filesystem::path& path) {
  auto rows = util::read_csv(path);
  if (rows.empty()) fail(Errc::malformed_record, path.string() + ": empty");
  auto parse_value = [&](const std::string& cell, size_t line) {
    try {
      size_t pos = 0;
      double v = std::stod(cell, &pos);
      if (pos != cell.size() && !util::trim(cell.substr(pos)).empty()) {
        throw std::invalid_argument(cell);
      }
      return v;
    } catch (const std::exception&) {
      fail(Errc::malformed_record, path.string() + ":" +
                                       std::to_string(line) +
                                       ": bad number '" + cell + "'");
    }
  };

  SimilarityMatrix matrix;
  bool triples = rows[0].size() == 3 &&
                 util::to_lower(util::trim(rows[0][0])) == "i" &&
                 util::to_lower(util::trim(rows[0][1])) == "j";
  if (triples) {
    size_t max_index = 0;
    std::vector<std::tuple<size_t, size_t, double>> entries;
    for (size_t r = 1; r < rows.size(); ++r) {
      if (rows[r].size() != 3) {
        fail(Errc::malformed_record,
             path.string() + ":" + std::to_string(r + 1));
      }
      auto i = static_cast<size_t>(parse_value(rows[r][0], r + 1));
      auto j = static_cast<size_t>(parse_value(rows[r][1], r + 1));
      double score = parse_value(rows[r][2], r + 1);
      max_index = std::max({max_index, i, j});
      entries.emplace_back(i, j, score);
    }
    matrix.n = max_index + 1;
    matrix.values.assign(matrix.n * matrix.n, 0.0);
    for (const auto& [i, j, score] : entries) {
      matrix.values[i * matrix.n + j] = score;
    }
    return matrix;
  }

  matrix.n = rows.size();
  matrix.values.reserve(matrix.n * matrix.n);
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != matrix.n) {
      fail(Errc::shape_mismatch,
           path.string() + ": row " + std::to_string(r + 1) + " has " +
               std::to_string(rows[r].size()) + " of " +
               std::to_string(matrix.n) + " columns");
    }
    for (const auto& cell : rows[r]) {
      matrix.values.push_back(parse_value(cell, r + 1));
    }
  }
  return matrix;
}

std::vector<ReportPair> nearest_pairing(
    const std::vector<std::string>& reports,
    const SimilarityMatrix& similarities, bool exclusive) {
  if (reports.size() != similarities.n) {
    fail(Errc::shape_mismatch,
         std::to_string(reports.size()) + " reports vs matrix of " +
             std::to_string(similarities.n));
  }
  std::vector<ReportPair> pairs;
  std::set<size_t> taken;
  for (size_t i = 0; i < reports.size(); ++i) {
    long best = -1;
    double best_score = 0.0;
    for (size_t j = 0; j < reports.size(); ++j) {
      if (j == i || (exclusive && taken.count(j))) continue;
      double score = similarities.at(i, j);
      if (best < 0 || score > best_score) {  // strict: ties keep lower index
        best = static_cast<long>(j);
        best_score = score;
      }
    }
    if (best < 0) continue;  // starved under exclusivity
    auto chosen = static_cast<size_t>(best);
    pairs.push_back({format_index_id("near", i), reports[i], reports[chosen],
                     "nearest_pair"});
    if (exclusive) taken.insert(chosen);
  }
  return pairs;
}

std::string corrupt_via_backend(std::string_view report,
                                const CorruptionSpec& spec, Gateway& gateway,
                                const TemplateLibrary& templates,
                                const std::string& replay_key) {
  std::string prompt = build_corruption_prompt(templates, report, spec);
  RawResponse response = gateway.complete(prompt, replay_key);
  static constexpr std::string_view kMarker = "[Candidate]:";
  size_t pos = response.text.rfind(kMarker);
  if (pos == std::string::npos) {
    fail(Errc::missing_candidate_marker, "reply lacks \"[Candidate]:\"");
  }
  return std::string(util::trim(response.text.substr(pos + kMarker.size())));
}

CorpusSplit split_80_10_10(const std::vector<ReportPair>& pairs,
                           uint64_t seed) {
  std::vector<ReportPair> shuffled = pairs;
  std::mt19937_64 rng(seed);
  util::shuffle(shuffled, rng);
  size_t n = shuffled.size();
  auto n_train = static_cast<size_t>(
      std::floor(0.8 * static_cast<double>(n)));
  auto n_val = static_cast<size_t>(std::floor(0.1 * static_cast<double>(n)));
  CorpusSplit split;
  split.train.assign(shuffled.begin(),
                     shuffled.begin() + static_cast<long>(n_train));
  split.val.assign(shuffled.begin() + static_cast<long>(n_train),
                   shuffled.begin() + static_cast<long>(n_train + n_val));
  split.test.assign(shuffled.begin() + static_cast<long>(n_train + n_val),
                    shuffled.end());
  return split;
}

}  // namespace green
