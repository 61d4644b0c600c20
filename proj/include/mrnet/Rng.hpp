#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace mrnet {

std::uint64_t splitmix64(std::uint64_t x);

// Deterministic random source. The std::mt19937_64 engine is bit-exact by
// the standard; the distributions are hand-rolled because the standard
// library's distribution objects are implementation-defined and would break
// byte-identical output across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t nextU64() { return engine_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(nextU64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via the Marsaglia polar method; one spare is cached.
  double normal();

  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Count of successes in two Bernoulli(p) trials: an allele count.
  // Always consumes exactly two draws.
  int binomial2(double p) {
    const int a = uniform01() < p ? 1 : 0;
    const int b = uniform01() < p ? 1 : 0;
    return a + b;
  }

  // Unbiased integer on [0, n) by rejection.
  std::uint64_t below(std::uint64_t n);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Independent substream; children with distinct salts never share state
  // with the parent or each other.
  Rng child(std::uint64_t salt) const {
    return Rng(splitmix64(seed_ ^ (0x9E3779B97F4A7C15ULL * (salt + 1))));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool hasSpare_ = false;
};

}  // namespace mrnet
