#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace cmr {

/// Purpose tags for independent random streams derived from one seed.
enum class Stream : std::uint64_t {
  degrees = 1,
  matching = 2,
  removal = 3,
  ties = 4,
  centrality = 5,
  local_limit = 6,
  pairs = 7,
};

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Mixes (seed, replica) into a derived 64-bit seed; used for per-replica experiment seeds.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t replica) {
  return splitmix64(splitmix64(seed) ^ splitmix64(replica + 0x632be59bd9b4e019ULL));
}

/// A generator for the stream keyed by (seed, replica, purpose). Streams with
/// different keys are statistically independent for all practical purposes.
inline Rng make_rng(std::uint64_t seed, std::uint64_t replica, Stream purpose) {
  std::uint64_t k = derive_seed(seed, replica);
  k = splitmix64(k ^ (static_cast<std::uint64_t>(purpose) * 0xd1b54a32d192ed03ULL));
  return Rng{k};
}

inline Rng make_rng(std::uint64_t seed, Stream purpose) { return make_rng(seed, 0, purpose); }

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, bound) by multiply-shift with rejection (Lemire).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  std::uint64_t x = rng();
  __uint128_t m = static_cast<__uint128_t>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = rng();
      m = static_cast<__uint128_t>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

template <class T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

/// Walker's alias table for O(1) sampling from a finite weight vector.
class AliasTable {
 public:
  explicit AliasTable(std::span<const double> weights) : prob_(weights.size()), alias_(weights.size()) {
    const std::size_t n = weights.size();
    double total = 0.0;
    for (double w : weights) total += w;
    std::vector<double> scaled(n);
    std::vector<std::size_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
      scaled[i] = weights[i] * static_cast<double>(n) / total;
      (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
      const std::size_t s = small.back(); small.pop_back();
      const std::size_t l = large.back(); large.pop_back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] = (scaled[l] + scaled[s]) - 1.0;
      (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    for (std::size_t i : large) { prob_[i] = 1.0; alias_[i] = i; }
    for (std::size_t i : small) { prob_[i] = 1.0; alias_[i] = i; }
  }

  std::size_t operator()(Rng& rng) const {
    const std::uint64_t x = rng();
    const auto column = static_cast<std::size_t>((static_cast<__uint128_t>(x) * prob_.size()) >> 64);
    const double coin = static_cast<double>(x & ((1ULL << 32) - 1)) * 0x1.0p-32;
    return coin < prob_[column] ? column : alias_[column];
  }

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
};

}  // namespace cmr
