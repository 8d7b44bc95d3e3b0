#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace bf {

/// Mixes a master seed with a stream number into an independent child seed
/// (SplitMix64 finalizer). Used to give every tree its own tie-breaking and
/// shuffle streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;

/// Seeded pseudo-random stream. The engine is std::mt19937_64; the bounded and
/// real-valued draws are implemented here rather than through <random>
/// distributions so that sequences are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // UniformRandomBitGenerator, for the few <random> distributions used directly.
  using result_type = std::uint64_t;
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return next(); }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform real in [0, 1).
  double uniform();

  /// Standard normal deviate.
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Fisher-Yates shuffle driven by Rng::below.
template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace bf
