#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>

namespace bilin {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// FNV-1a, used to turn substream names into keys.
constexpr std::uint64_t hash_name(std::string_view name) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char ch : name) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Counter-based 64-bit generator.
///
/// Output k of the stream with key K is mix64(K + (k + 1) * gamma), so any
/// draw is a pure function of (key, position). Substreams are derived with
/// split(), which hashes the parent key together with an index or a name;
/// a substream never shares a key with its parent. The rounding loop uses
/// split(iteration) so that iteration t sees the same draws for every T.
class Stream {
 public:
  using result_type = std::uint64_t;

  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  constexpr explicit Stream(std::uint64_t key) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    counter_ += 1;
    return mix64(key_ + counter_ * kGamma);
  }

  constexpr Stream split(std::uint64_t index) const noexcept {
    return Stream(mix64(mix64(key_ ^ 0x5851f42d4c957f2dULL) + index * kGamma + 1));
  }

  constexpr Stream split(std::string_view name) const noexcept { return split(hash_name(name)); }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  constexpr bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Standard normal by Box-Muller; consumes two draws, keeps one variate.
  double normal() noexcept {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  constexpr std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace bilin
