#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <random>
#include <set>

#include "green/errors.hpp"
#include "green/util/io.hpp"
#include "green/util/rng.hpp"
#include "green/util/sha256.hpp"
#include "green/util/text.hpp"

using namespace green;

TEST_CASE("trim strips ascii whitespace from both ends") {
  CHECK(util::trim("  a b \t\r\n") == "a b");
  CHECK(util::trim("") == "");
  CHECK(util::trim(" \t ") == "");
  CHECK(util::trim("x") == "x");
}

TEST_CASE("split_lines handles crlf and trailing newline") {
  auto lines = util::split_lines("a\r\nb\nc\n");
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "a");
  CHECK(lines[1] == "b");
  CHECK(lines[2] == "c");

  CHECK(util::split_lines("").empty());
  auto keep_empty = util::split_lines("a\n\nb");
  REQUIRE(keep_empty.size() == 3);
  CHECK(keep_empty[1] == "");
}

TEST_CASE("word_tokens lowercases and splits on non-alphanumerics") {
  auto tokens = util::word_tokens("The cat, the CAT; 2 cats!");
  std::vector<std::string> expected{"the", "cat", "the", "cat", "2", "cats"};
  CHECK(tokens == expected);
  CHECK(util::word_tokens("...").empty());
}

TEST_CASE("replace_all substitutes every occurrence") {
  CHECK(util::replace_all("a{x}b{x}", "{x}", "1") == "a1b1");
  CHECK(util::replace_all("abc", "{x}", "1") == "abc");
}

TEST_CASE("sha256 matches the empty-string and abc test vectors") {
  CHECK(util::sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(util::sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("uniform_index stays in range and covers all buckets") {
  std::mt19937_64 rng(7);
  std::map<uint64_t, int> hits;
  for (int i = 0; i < 7000; ++i) {
    uint64_t v = util::uniform_index(rng, 7);
    REQUIRE(v < 7);
    ++hits[v];
  }
  CHECK(hits.size() == 7);
  for (const auto& [bucket, count] : hits) {
    CHECK(count > 700);  // ~1000 expected per bucket
  }
  CHECK(util::uniform_index(rng, 1) == 0);
}

TEST_CASE("canonical_double lies in [0,1)") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    double v = util::canonical_double(rng);
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("shuffle permutes without losing elements") {
  std::vector<int> values(100);
  for (int i = 0; i < 100; ++i) values[static_cast<size_t>(i)] = i;
  auto original = values;
  std::mt19937_64 rng(11);
  util::shuffle(values, rng);
  CHECK(values != original);  // 1/100! odds of a false failure
  std::sort(values.begin(), values.end());
  CHECK(values == original);
}

TEST_CASE("sample_indices returns sorted distinct indices") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    auto picked = util::sample_indices(rng, 6, 3);
    REQUIRE(picked.size() == 3);
    CHECK(std::is_sorted(picked.begin(), picked.end()));
    std::set<size_t> unique(picked.begin(), picked.end());
    CHECK(unique.size() == 3);
    CHECK(*picked.rbegin() < 6);
  }
  CHECK(util::sample_indices(rng, 4, 0).empty());
  CHECK(util::sample_indices(rng, 4, 4) ==
        std::vector<size_t>{0, 1, 2, 3});
}

TEST_CASE("sample_indices draws every k-subset") {
  std::mt19937_64 rng(9);
  std::set<std::vector<size_t>> seen;
  for (int trial = 0; trial < 2000; ++trial) {
    seen.insert(util::sample_indices(rng, 4, 2));
  }
  CHECK(seen.size() == 6);  // C(4,2)
}

TEST_CASE("derive_seed separates streams deterministically") {
  CHECK(util::derive_seed(1, 0) == util::derive_seed(1, 0));
  CHECK(util::derive_seed(1, 0) != util::derive_seed(1, 1));
  CHECK(util::derive_seed(1, 0) != util::derive_seed(2, 0));
}

TEST_CASE("NormalSource produces a roughly standard sample") {
  std::mt19937_64 rng(17);
  util::NormalSource normal(rng);
  double sum = 0.0, sum_sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    double v = normal.next();
    sum += v;
    sum_sq += v * v;
  }
  double mean = sum / n;
  double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.05);
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("csv parser handles quotes, escapes, and embedded newlines") {
  auto rows = util::parse_csv("a,b,c\n\"x,y\",\"he said \"\"hi\"\"\",\"1\n2\"\n");
  REQUIRE(rows.size() == 2);
  REQUIRE(rows[1].size() == 3);
  CHECK(rows[1][0] == "x,y");
  CHECK(rows[1][1] == "he said \"hi\"");
  CHECK(rows[1][2] == "1\n2");
}

TEST_CASE("csv parser rejects an unterminated quote") {
  CHECK_THROWS_AS(util::parse_csv("a,\"b\n"), Error);
}

TEST_CASE("write_file_atomic leaves no temp files behind") {
  auto dir = std::filesystem::temp_directory_path() / "green-io-test";
  std::filesystem::create_directories(dir);
  auto path = dir / "out.txt";
  util::write_file_atomic(path, "payload");
  CHECK(util::read_file(path) == "payload");
  size_t entries = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    (void)entry;
    ++entries;
  }
  CHECK(entries == 1);
  std::filesystem::remove_all(dir);
}
