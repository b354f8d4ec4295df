#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace pcc {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a(std::string_view text);

// Combines values into one seed; order matters.
std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value);

// mt19937_64 with its own integer/real mappings so draws do not depend on
// the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent sub-stream for one named structural choice.
  static Rng stream(std::uint64_t seed, std::string_view name) {
    return Rng(splitmix64(seed ^ fnv1a(name)));
  }

  std::uint64_t next() { return engine_(); }
  // Uniform in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  // Uniform in [lo, hi); lo when lo == hi.
  double uniform_real(double lo, double hi);
  // Uniform in (0, 1].
  double positive_unit();

  // k distinct elements of `pool`, in draw order (partial Fisher-Yates).
  template <typename T>
  std::vector<T> sample(std::vector<T> pool, std::size_t k) {
    if (k > pool.size()) k = pool.size();
    for (std::size_t i = 0; i < k; ++i) {
      const auto j = static_cast<std::size_t>(
          uniform_int(static_cast<std::int64_t>(i), static_cast<std::int64_t>(pool.size() - 1)));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pcc
