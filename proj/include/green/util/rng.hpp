#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace green::util {

// std::uniform_int_distribution and friends are not bit-stable across
// standard libraries; mt19937_64 itself is. Everything seeded goes through
// these helpers so outputs replay on any toolchain.

// Unbiased draw in [0, n). Rejection sampling on raw 64-bit outputs.
uint64_t uniform_index(std::mt19937_64& rng, uint64_t n);

// Uniform double in [0, 1) with 53 random bits.
double canonical_double(std::mt19937_64& rng);

// Standard normal via Box-Muller. Consumes two draws per pair; the second
// value is cached.
class NormalSource {
 public:
  explicit NormalSource(std::mt19937_64& rng) : rng_(rng) {}
  double next();

 private:
  std::mt19937_64& rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

template <typename T>
void shuffle(std::vector<T>& values, std::mt19937_64& rng) {
  for (size_t i = values.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(uniform_index(rng, i));
    std::swap(values[i - 1], values[j]);
  }
}

// Distinct sample of k indices from [0, n), ascending order.
std::vector<size_t> sample_indices(std::mt19937_64& rng, size_t n, size_t k);

// Decorrelated child seed for stream `stream` (splitmix64 mix).
uint64_t derive_seed(uint64_t seed, uint64_t stream);

}  // namespace green::util
