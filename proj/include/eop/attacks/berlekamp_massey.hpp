#pragma once

#include <cstdint>
#include <vector>

namespace eop::attacks {

// Shortest linear recurrence s[n] = XOR_{i=1..L} c[i] s[n-i] generating bits.
struct Recurrence {
  unsigned length = 0;               // linear complexity L
  std::vector<std::uint8_t> c;       // c[0] = 1, size L + 1
};

inline Recurrence berlekamp_massey(const std::vector<std::uint8_t>& s) {
  const std::size_t n = s.size();
  std::vector<std::uint8_t> c(n + 1, 0), b(n + 1, 0);
  c[0] = b[0] = 1;
  std::size_t L = 0, m = 1;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint8_t d = s[i] & 1U;
    for (std::size_t j = 1; j <= L; ++j) d ^= c[j] & s[i - j];
    if (d == 0) {
      ++m;
      continue;
    }
    if (2 * L <= i) {
      const auto t = c;
      for (std::size_t j = 0; j + m <= n; ++j) c[j + m] ^= b[j];
      L = i + 1 - L;
      b = t;
      m = 1;
    } else {
      for (std::size_t j = 0; j + m <= n; ++j) c[j + m] ^= b[j];
      ++m;
    }
  }
  c.resize(L + 1);
  return {static_cast<unsigned>(L), c};
}

}  // namespace eop::attacks
