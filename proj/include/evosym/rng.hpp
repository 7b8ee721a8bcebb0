#pragma once

#include <cstdint>
#include <string>

namespace evosym {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

/// Derive an independent stream from a master seed and a textual key.
/// Every randomized check in the toolkit draws through here, which is what
/// makes reports byte-identical across --jobs settings.
inline std::uint64_t split_seed(std::uint64_t seed, const std::string& key) {
  return splitmix64(splitmix64(seed ^ 0x243f6a8885a308d3ULL) ^ fnv1a(key));
}

/// Map 64 bits to [0,1) without touching any library distribution, so the
/// stream is identical on every platform.
inline double unit01(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// The default sampling cell: the positive box [1.1, 2.9]. Staying away
/// from 0 and 1 keeps logs, roots and denominators well conditioned.
inline double sample_default(std::uint64_t h) { return 1.1 + 1.8 * unit01(splitmix64(h)); }

/// Sample inside (lo, hi), shrunk 5% from each end so constraints that are
/// open intervals are respected with margin.
inline double sample_in(std::uint64_t h, double lo, double hi) {
  double m = 0.05 * (hi - lo);
  return (lo + m) + (hi - lo - 2 * m) * unit01(splitmix64(h));
}

}  // namespace evosym
