#pragma once

#include <cstdint>
#include <random>

namespace hierq {

// splitmix64; used only to derive independent engine seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Counter-based substream derivation: one root seed per run, deterministic
// per (seed index, level, purpose) streams so runs are reproducible and
// seed records are independent of which other seeds executed.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t x = splitmix64(root ^ 0x8f1bbcdcbfa53e0bull);
  x = splitmix64(x ^ splitmix64(a));
  x = splitmix64(x ^ splitmix64(b + 0x2545f4914f6cdd1dull));
  x = splitmix64(x ^ splitmix64(c + 0x9e3779b97f4a7c15ull));
  return x;
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t root, std::uint64_t a, std::uint64_t b = 0,
                    std::uint64_t c = 0) {
  return Rng(derive_seed(root, a, b, c));
}

}  // namespace hierq
