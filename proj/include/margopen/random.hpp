#ifndef MARGOPEN_RANDOM_HPP
#define MARGOPEN_RANDOM_HPP

#include <cstdint>
#include <limits>

#include "rational.hpp"

namespace margopen {

struct Seed {
  std::uint64_t value = 0;
  friend bool operator==(const Seed&, const Seed&) = default;
};

/// SplitMix64 finalizer (Steele, Lea, Flood). Used both as the generator's
/// output function and to derive per-trial seeds: trial_seed = mix(seed ^ trial).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr Seed derive_seed(Seed base, std::uint64_t index) { return Seed{mix64(base.value ^ index)}; }

/// SplitMix64: state += golden gamma, output = mix64(state). All draws below
/// are built from raw 64-bit outputs only, so a seed replays bit-for-bit on
/// any platform (std distributions are implementation-defined).
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  explicit SplitMix64(Seed seed) : state_(seed.value) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform integer in [0, n), n > 0, by rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t r;
    do {
      r = (*this)();
    } while (r >= limit);
    return r % n;
  }

  /// Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool coin() { return ((*this)() >> 63) != 0; }

  /// k/den with k uniform in [0, den].
  Rational fraction(std::uint64_t den) {
    return Rational(Integer(below(den + 1)), Integer(den));
  }

  /// k/(den+1) with k uniform in [1, den]: strictly inside (0, 1).
  Rational interior_fraction(std::uint64_t den) {
    return Rational(Integer(below(den) + 1), Integer(den + 1));
  }

 private:
  std::uint64_t state_;
};

}  // namespace margopen

#endif  // MARGOPEN_RANDOM_HPP
