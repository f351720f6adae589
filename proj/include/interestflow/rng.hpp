#ifndef INTERESTFLOW_RNG_HPP_
#define INTERESTFLOW_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

// Seeded randomness helpers. All draws go through the raw mt19937_64 output
// stream (which is fixed by the standard), so results are reproducible for a
// given seed independent of the standard library's distribution internals.

namespace iflow {

inline constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ull;

inline std::uint64_t fnv1a64(std::string_view bytes,
                             std::uint64_t h = kFnvOffset) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

inline std::uint64_t fnv1a64_u64(std::uint64_t value,
                                 std::uint64_t h = kFnvOffset) {
  for (int i = 0; i < 8; ++i) {
    h ^= (value >> (8 * i)) & 0xffu;
    h *= kFnvPrime;
  }
  return h;
}

// Per-entity seed from a master seed and a stable identifier, so work can be
// partitioned across threads without changing results.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view id) {
  return fnv1a64(id, fnv1a64_u64(master));
}

// Unbiased integer in [0, n) via rejection from the top of the 64-bit range.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % n;
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_real01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller. One value per call; the pair's second half
// is discarded to keep the draw count predictable.
inline double normal01(std::mt19937_64& rng) {
  double u1;
  do {
    u1 = uniform_real01(rng);
  } while (u1 <= 0.0);
  const double u2 = uniform_real01(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
}

}  // namespace iflow

#endif  // INTERESTFLOW_RNG_HPP_
