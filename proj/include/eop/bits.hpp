#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "eop/error.hpp"

namespace eop {

// Fixed-width bit vector. Bit i is the coefficient of 2^i when the vector is
// read as an unsigned integer; hex text is that integer, most significant
// digit first.
template <std::size_t N>
class BitArray {
 public:
  static constexpr std::size_t kBits = N;
  static constexpr std::size_t kWords = (N + 63) / 64;

  constexpr BitArray() = default;

  static BitArray from_u64(std::uint64_t v) {
    BitArray b;
    b.words_[0] = v;
    b.trim();
    return b;
  }

  static BitArray from_hex(std::string_view hex) {
    if (hex.size() != (N + 3) / 4) {
      throw ParameterError("expected " + std::to_string((N + 3) / 4) +
                           " hex digits, got " + std::to_string(hex.size()));
    }
    BitArray b;
    std::size_t bit = 0;
    for (auto it = hex.rbegin(); it != hex.rend(); ++it, bit += 4) {
      const int v = hex_value(*it);
      if (v < 0) throw ParameterError("bad hex digit in '" + std::string(hex) + "'");
      for (int k = 0; k < 4; ++k) {
        if ((v >> k) & 1) {
          if (bit + k >= N) throw ParameterError("hex value exceeds " + std::to_string(N) + " bits");
          b.set(bit + k, true);
        }
      }
    }
    return b;
  }

  std::string to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out((N + 3) / 4, '0');
    for (std::size_t d = 0; d < out.size(); ++d) {
      int v = 0;
      for (int k = 0; k < 4; ++k) {
        const std::size_t i = 4 * d + k;
        if (i < N && test(i)) v |= 1 << k;
      }
      out[out.size() - 1 - d] = kDigits[v];
    }
    return out;
  }

  constexpr bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }

  constexpr void set(std::size_t i, bool v) {
    const std::uint64_t m = std::uint64_t{1} << (i % 64);
    if (v) {
      words_[i / 64] |= m;
    } else {
      words_[i / 64] &= ~m;
    }
  }

  constexpr void flip(std::size_t i) { words_[i / 64] ^= std::uint64_t{1} << (i % 64); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool none() const { return count() == 0; }

  const std::array<std::uint64_t, kWords>& words() const { return words_; }

  friend BitArray operator^(BitArray a, const BitArray& b) {
    for (std::size_t i = 0; i < kWords; ++i) a.words_[i] ^= b.words_[i];
    return a;
  }

  friend bool operator==(const BitArray&, const BitArray&) = default;

  // Big-endian byte string of the integer value.
  std::array<std::uint8_t, (N + 7) / 8> to_bytes() const {
    std::array<std::uint8_t, (N + 7) / 8> out{};
    for (std::size_t i = 0; i < N; ++i) {
      if (test(i)) out[out.size() - 1 - i / 8] |= static_cast<std::uint8_t>(1U << (i % 8));
    }
    return out;
  }

 private:
  static int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  }

  constexpr void trim() {
    if constexpr (N % 64 != 0) words_[kWords - 1] &= (std::uint64_t{1} << (N % 64)) - 1;
  }

  std::array<std::uint64_t, kWords> words_{};
};

using Key80 = BitArray<80>;
using Iv80 = BitArray<80>;

}  // namespace eop
