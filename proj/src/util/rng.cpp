#include "green/util/rng.hpp"

#include <algorithm>
#include <cmath>

#include "green/errors.hpp"

namespace green::util {

uint64_t uniform_index(std::mt19937_64& rng, uint64_t n) {
  if (n == 0) fail(Errc::invalid_argument, "uniform_index over empty range");
  // Largest multiple of n that fits in 64 bits; draws past it would bias.
  uint64_t threshold = (0 - n) % n;
  while (true) {
    uint64_t x = rng();
    if (x >= threshold) return x % n;
  }
}

double canonical_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double NormalSource::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = canonical_double(rng_);
  while (u1 <= 0.0) u1 = canonical_double(rng_);
  double u2 = canonical_double(rng_);
  double radius = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * 3.14159265358979323846 * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::vector<size_t> sample_indices(std::mt19937_64& rng, size_t n, size_t k) {
  if (k > n) fail(Errc::invalid_argument, "sample larger than population");
  std::vector<size_t> pool(n);
  for (size_t i = 0; i < n; ++i) pool[i] = i;
  // Partial Fisher-Yates: first k entries are a uniform distinct sample.
  for (size_t i = 0; i < k; ++i) {
    size_t j = i + static_cast<size_t>(uniform_index(rng, n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

uint64_t derive_seed(uint64_t seed, uint64_t stream) {
  // splitmix64 finalizer over the combined value.
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace green::util
