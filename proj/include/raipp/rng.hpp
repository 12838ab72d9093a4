#ifndef RAIPP_RNG_HPP
#define RAIPP_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace raipp::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : s) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ull;
  return h;
}

// Named substream of a master seed.  Instance tensors each draw from their
// own stream ("A", "B", "D", "b", "nu", "d") so layouts reproduce
// bit-for-bit regardless of generation order; `substream` indexes e.g. the
// i-th operator or a resample attempt.
//
// Uniform doubles are produced from the top 53 bits of the (standardized)
// mt19937_64 output, so values are identical across platforms.
class Stream {
 public:
  Stream(std::uint64_t seed, std::string_view name, std::uint64_t substream = 0)
      : eng_(splitmix64(splitmix64(seed ^ fnv1a(name)) + substream)) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  std::uint64_t bits() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace raipp::rng

#endif  // RAIPP_RNG_HPP
