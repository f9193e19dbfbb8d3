#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>

namespace sftlab {

inline constexpr std::uint64_t kDefaultSeed = 20260415ULL;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic child seed; `tag` names the branch of the derivation tree.
inline std::uint64_t derive_seed(std::uint64_t parent, std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(parent ^ splitmix64(h));
}

inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
  return splitmix64(parent ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Seeded random stream. Draws are platform independent: only the raw
/// 64-bit engine output is used, never the std distributions.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed = kDefaultSeed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Index drawn from unnormalized nonnegative weights.
  int categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = uniform() * total;
    int last_positive = -1;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0.0) continue;
      last_positive = static_cast<int>(i);
      if (u < weights[i]) return last_positive;
      u -= weights[i];
    }
    return last_positive;
  }

  RandomStream child(std::string_view tag) const { return RandomStream(derive_seed(seed_, tag)); }
  RandomStream child(std::uint64_t index) const { return RandomStream(derive_seed(seed_, index)); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace sftlab
