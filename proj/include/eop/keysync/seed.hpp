#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "eop/bits.hpp"
#include "eop/cipher/trivium.hpp"
#include "eop/error.hpp"

namespace eop::keysync {

using SeedBits = BitArray<160>;

struct Seed {
  SeedBits bits;
  std::uint64_t generation = 0;
  friend bool operator==(const Seed&, const Seed&) = default;
};

// key = bits 0..79, iv = bits 80..159.
inline std::pair<Key80, Iv80> split_seed(const Seed& seed) {
  Key80 key;
  Iv80 iv;
  for (unsigned i = 0; i < 80; ++i) {
    key.set(i, seed.bits.test(i));
    iv.set(i, seed.bits.test(80 + i));
  }
  return {key, iv};
}

inline SeedBits join_seed(const Key80& key, const Iv80& iv) {
  SeedBits out;
  for (unsigned i = 0; i < 80; ++i) {
    out.set(i, key.test(i));
    out.set(80 + i, iv.test(i));
  }
  return out;
}

// Next power-up seed: the first 160 keystream bits of Trivium keyed by the
// previous seed; keystream bit j becomes seed bit j.
inline Seed seed_update(const Seed& prev) {
  const auto [key, iv] = split_seed(prev);
  cipher::TriviumState s = cipher::trivium_init(key, iv);
  Seed next;
  next.generation = prev.generation + 1;
  unsigned j = 0;
  for (unsigned width : {64u, 64u, 32u}) {
    const auto kv = s.next(width);
    for (unsigned b = 0; b < width; ++b, ++j) next.bits.set(j, (kv.bits >> (width - 1 - b)) & 1U);
  }
  return next;
}

// Seed chain: one "generation hex" line per seed.
inline void write_seed_chain(std::ostream& out, const std::vector<Seed>& chain) {
  for (const auto& s : chain) out << s.generation << ' ' << s.bits.to_hex() << '\n';
}

inline std::vector<Seed> read_seed_chain(std::istream& in) {
  std::vector<Seed> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    Seed s;
    std::string hex;
    if (!(ls >> s.generation >> hex)) throw ParameterError("seed chain line " + std::to_string(lineno) + ": expected 'generation hex'");
    try {
      s.bits = SeedBits::from_hex(hex);
    } catch (const ParameterError& e) {
      throw ParameterError("seed chain line " + std::to_string(lineno) + ": " + e.what());
    }
    out.push_back(s);
  }
  return out;
}

inline void write_seed_chain(const std::string& path, const std::vector<Seed>& chain) {
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot write seed chain");
  write_seed_chain(out, chain);
  if (!out) throw IoError(path, "write failed");
}

}  // namespace eop::keysync
