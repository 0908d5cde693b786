#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "eop/error.hpp"

namespace eop::obfusc {

inline constexpr unsigned kMaxLanes = 16;

struct PermutationKey {
  std::uint64_t raw = 0;
  unsigned n = 8;
};

// Output lane map[i] carries input lane i.
struct Permutation {
  std::vector<unsigned> map;

  unsigned size() const { return static_cast<unsigned>(map.size()); }

  Permutation inverse() const {
    Permutation inv;
    inv.map.resize(map.size());
    for (unsigned i = 0; i < map.size(); ++i) inv.map[map[i]] = i;
    return inv;
  }

  static Permutation identity(unsigned n) {
    Permutation p;
    for (unsigned i = 0; i < n; ++i) p.map.push_back(i);
    return p;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
};

inline std::uint64_t factorial(unsigned n) {
  std::uint64_t f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

// Lehmer-code decoding: digit i (weight (n-1-i)!) picks among the unused
// outputs in increasing order.
inline Permutation permutation_from_key(const PermutationKey& key) {
  if (key.n < 1 || key.n > kMaxLanes) throw ParameterError("permutation lane count must be in 1..16");
  if (key.raw >= factorial(key.n)) {
    throw ParameterError("permutation key " + std::to_string(key.raw) + " not below " + std::to_string(key.n) + "!");
  }
  std::vector<unsigned> free;
  for (unsigned i = 0; i < key.n; ++i) free.push_back(i);
  Permutation p;
  std::uint64_t rest = key.raw;
  for (unsigned i = 0; i < key.n; ++i) {
    const std::uint64_t w = factorial(key.n - 1 - i);
    const auto idx = static_cast<std::size_t>(rest / w);
    rest %= w;
    p.map.push_back(free[idx]);
    free.erase(free.begin() + static_cast<std::ptrdiff_t>(idx));
  }
  return p;
}

inline PermutationKey key_from_permutation(const Permutation& p) {
  const unsigned n = p.size();
  if (n < 1 || n > kMaxLanes) throw ParameterError("permutation lane count must be in 1..16");
  std::uint64_t raw = 0;
  for (unsigned i = 0; i < n; ++i) {
    unsigned smaller = 0;
    for (unsigned j = i + 1; j < n; ++j) smaller += p.map[j] < p.map[i];
    raw += smaller * factorial(n - 1 - i);
  }
  return {raw, n};
}

inline std::uint64_t permute_word(const Permutation& p, std::uint64_t word, unsigned lanes) {
  if (lanes != p.size()) throw ParameterError("word lane count does not match permutation");
  std::uint64_t out = 0;
  for (unsigned i = 0; i < lanes; ++i) {
    if ((word >> i) & 1U) out |= std::uint64_t{1} << p.map[i];
  }
  return out;
}

}  // namespace eop::obfusc
