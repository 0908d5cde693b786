#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "eop/crypto_link.hpp"
#include "eop/error.hpp"

namespace eop::attacks {

struct PassiveStats {
  std::uint64_t pulses = 0;
  std::vector<double> ones_fraction;  // per lane
  double max_bias = 0.0;              // max |fraction - 0.5|
  double max_lane_correlation = 0.0;  // max |Pearson r| over lane pairs; constant lanes count as 1
  double tolerance = 0.0;
  bool indistinguishable = false;
};

// Monitors the ciphertext of a constant plaintext stream, one word per pulse,
// and compares it against fair-coin statistics. The monobit bound is
// `tolerance`; the pairwise correlation bound is twice that.
inline PassiveStats passive_monitor_test(link::LinkEndpoint sender, std::uint64_t plaintext, std::uint64_t pulses,
                                         double tolerance = 0.02, bool advance_keypad = true) {
  if (tolerance <= 0.0 || tolerance >= 0.5) throw ParameterError("tolerance must be in (0, 0.5)");
  const double needed = std::ceil(4.0 / (tolerance * tolerance));
  if (double(pulses) < needed) {
    throw ParameterError("passive monitor needs at least " + std::to_string(std::uint64_t(needed)) +
                         " pulses for a tolerance of " + std::to_string(tolerance));
  }
  const unsigned n = sender.lanes();
  if (!advance_keypad) sender.advance_keypad();
  std::vector<std::uint64_t> ones(n, 0);
  std::vector<std::vector<std::uint64_t>> both(n, std::vector<std::uint64_t>(n, 0));
  for (std::uint64_t s = 0; s < pulses; ++s) {
    if (advance_keypad) sender.advance_keypad();
    const std::uint64_t c = link::encrypt_word(sender, {plaintext, n, s}).bits;
    for (unsigned i = 0; i < n; ++i) {
      if (!((c >> i) & 1U)) continue;
      ++ones[i];
      for (unsigned j = i + 1; j < n; ++j) both[i][j] += (c >> j) & 1U;
    }
  }

  PassiveStats st;
  st.pulses = pulses;
  st.tolerance = tolerance;
  const double N = double(pulses);
  for (unsigned i = 0; i < n; ++i) {
    const double f = ones[i] / N;
    st.ones_fraction.push_back(f);
    st.max_bias = std::max(st.max_bias, std::abs(f - 0.5));
  }
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned j = i + 1; j < n; ++j) {
      const double pi = st.ones_fraction[i], pj = st.ones_fraction[j];
      const double var = pi * (1 - pi) * pj * (1 - pj);
      const double r = var <= 0.0 ? 1.0 : (both[i][j] / N - pi * pj) / std::sqrt(var);
      st.max_lane_correlation = std::max(st.max_lane_correlation, std::abs(r));
    }
  }
  st.indistinguishable = st.max_bias <= tolerance && st.max_lane_correlation <= 2 * tolerance;
  return st;
}

}  // namespace eop::attacks
