#pragma once

#include <bitset>
#include <cstdint>
#include <span>
#include <utility>

#include "eop/bits.hpp"
#include "eop/error.hpp"

namespace eop::cipher {

// Keystream bits drawn in one call. The first bit produced sits in the most
// significant used position (bit width-1), the last one in bit 0.
struct KeypadVector {
  std::uint64_t bits = 0;
  unsigned width = 0;
  std::uint64_t index = 0;  // keystream bits consumed after this draw

  bool lane(unsigned i) const { return (bits >> i) & 1U; }
  friend bool operator==(const KeypadVector&, const KeypadVector&) = default;
};

class TriviumState {
 public:
  static constexpr unsigned kWarmupRounds = 4 * 288;
  static constexpr unsigned kMaxWidth = 64;

  TriviumState() = default;

  static TriviumState loaded(const Key80& key, const Iv80& iv) {
    TriviumState s;
    for (unsigned i = 0; i < 80; ++i) {
      if (key.test(i)) s.a_ |= u128{1} << i;
      if (iv.test(i)) s.b_ |= u128{1} << i;
    }
    s.c_ = u128{7} << 108;
    return s;
  }

  void warm_up() {
    for (unsigned r = 0; r < kWarmupRounds; r += 64) step(64);
    warm_ = true;
  }

  KeypadVector next(unsigned n) {
    if (n < 1 || n > kMaxWidth) throw ParameterError("keystream width must be in 1..64");
    if (!warm_) throw StateError("keystream drawn before warm-up");
    KeypadVector kv;
    kv.bits = step(n);
    kv.width = n;
    consumed_ += n;
    kv.index = consumed_;
    return kv;
  }

  bool warmed_up() const { return warm_; }
  std::uint64_t consumed() const { return consumed_; }

  // s_1..s_288 as bits 0..287.
  std::bitset<288> bits() const {
    std::bitset<288> out;
    for (unsigned i = 0; i < 93; ++i) out[i] = (a_ >> i) & 1U;
    for (unsigned i = 0; i < 84; ++i) out[93 + i] = (b_ >> i) & 1U;
    for (unsigned i = 0; i < 111; ++i) out[177 + i] = (c_ >> i) & 1U;
    return out;
  }

  friend bool operator==(const TriviumState&, const TriviumState&) = default;

 private:
  using u128 = unsigned __int128;

  static constexpr u128 mask(unsigned n) {
    return n >= 128 ? ~u128{0} : (u128{1} << n) - 1;
  }

  // Bits that tap position p (1-based inside its register) presents over the
  // next n steps; step j lands at bit n-1-j. Valid while p - n >= 2, which
  // holds for every tap when n <= 64.
  static std::uint64_t tap(u128 r, unsigned p, unsigned n) {
    return static_cast<std::uint64_t>((r >> (p - n)) & mask(n));
  }

  std::uint64_t step(unsigned n) {
    const std::uint64_t a66 = tap(a_, 66, n), a93 = tap(a_, 93, n);
    const std::uint64_t b69 = tap(b_, 69, n), b84 = tap(b_, 84, n);
    const std::uint64_t c66 = tap(c_, 66, n), c111 = tap(c_, 111, n);
    std::uint64_t t1 = a66 ^ a93;
    std::uint64_t t2 = b69 ^ b84;
    std::uint64_t t3 = c66 ^ c111;
    const std::uint64_t z = t1 ^ t2 ^ t3;
    t1 ^= (tap(a_, 91, n) & tap(a_, 92, n)) ^ tap(b_, 78, n);
    t2 ^= (tap(b_, 82, n) & tap(b_, 83, n)) ^ tap(c_, 87, n);
    t3 ^= (tap(c_, 109, n) & tap(c_, 110, n)) ^ tap(a_, 69, n);
    a_ = ((a_ << n) | t3) & mask(93);
    b_ = ((b_ << n) | t1) & mask(84);
    c_ = ((c_ << n) | t2) & mask(111);
    return z;
  }

  u128 a_ = 0;  // s_1..s_93, s_k at bit k-1
  u128 b_ = 0;  // s_94..s_177
  u128 c_ = 0;  // s_178..s_288
  bool warm_ = false;
  std::uint64_t consumed_ = 0;
};

inline TriviumState trivium_init(const Key80& key, const Iv80& iv) {
  TriviumState s = TriviumState::loaded(key, iv);
  s.warm_up();
  return s;
}

// Key and IV given as one bit per element, element i -> key bit i.
inline TriviumState trivium_init(std::span<const std::uint8_t> key, std::span<const std::uint8_t> iv) {
  if (key.size() != 80 || iv.size() != 80) throw ParameterError("key and iv must be exactly 80 bits");
  Key80 k;
  Iv80 v;
  for (unsigned i = 0; i < 80; ++i) {
    k.set(i, key[i] != 0);
    v.set(i, iv[i] != 0);
  }
  return trivium_init(k, v);
}

inline std::pair<KeypadVector, TriviumState> trivium_next(TriviumState s, unsigned n) {
  KeypadVector kv = s.next(n);
  return {kv, s};
}

}  // namespace eop::cipher
