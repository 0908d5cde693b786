#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "eop/error.hpp"

namespace eop::cipher {

// Fibonacci LFSR. Register bit i-1 holds s_i; output is s_d; the feedback
// (XOR of the tap bits) enters at s_1. Taps are polynomial exponents, so the
// output obeys o[m] = XOR over taps t of o[m-t].
class LfsrState {
 public:
  LfsrState() = default;

  LfsrState(std::vector<unsigned> taps, std::uint64_t reg) : taps_(std::move(taps)) {
    if (taps_.empty()) throw ParameterError("LFSR needs at least one tap");
    std::sort(taps_.begin(), taps_.end(), std::greater<>());
    taps_.erase(std::unique(taps_.begin(), taps_.end()), taps_.end());
    degree_ = taps_.front();
    if (degree_ < 2 || degree_ > 64 || taps_.back() < 1) {
      throw ParameterError("LFSR degree must be in 2..64 and taps >= 1");
    }
    for (unsigned t : taps_) tap_mask_ |= std::uint64_t{1} << (t - 1);
    reg_ = reg & width_mask();
  }

  // State whose next `degree` outputs are bits[0..degree).
  static LfsrState from_output_prefix(std::vector<unsigned> taps, const std::vector<std::uint8_t>& bits) {
    LfsrState s(std::move(taps), 0);
    if (bits.size() < s.degree_) throw InsufficientDataError("need at least degree output bits");
    std::uint64_t reg = 0;
    for (unsigned k = 0; k < s.degree_; ++k) {
      if (bits[k]) reg |= std::uint64_t{1} << (s.degree_ - 1 - k);
    }
    s.reg_ = reg;
    return s;
  }

  bool step() {
    const bool out = (reg_ >> (degree_ - 1)) & 1U;
    const std::uint64_t fb = std::popcount(reg_ & tap_mask_) & 1U;
    reg_ = ((reg_ << 1) | fb) & width_mask();
    return out;
  }

  std::vector<std::uint8_t> next(std::size_t n) {
    if (taps_.empty()) throw ParameterError("LFSR has no taps");
    std::vector<std::uint8_t> out(n);
    for (auto& b : out) b = step() ? 1 : 0;
    return out;
  }

  unsigned degree() const { return degree_; }
  std::uint64_t reg() const { return reg_; }
  const std::vector<unsigned>& taps() const { return taps_; }

  friend bool operator==(const LfsrState&, const LfsrState&) = default;

 private:
  std::uint64_t width_mask() const {
    return degree_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << degree_) - 1;
  }

  std::vector<unsigned> taps_;
  unsigned degree_ = 0;
  std::uint64_t tap_mask_ = 0;
  std::uint64_t reg_ = 0;
};

inline std::pair<std::vector<std::uint8_t>, LfsrState> lfsr_next(LfsrState s, std::size_t n) {
  auto bits = s.next(n);
  return {std::move(bits), std::move(s)};
}

// Maximal-length tap sets (Xilinx XAPP052) for degrees 2..32.
inline std::vector<unsigned> maximal_taps(unsigned degree) {
  static const std::vector<std::vector<unsigned>> kTable = {
      {2, 1},          {3, 2},          {4, 3},          {5, 3},          {6, 5},
      {7, 6},          {8, 6, 5, 4},    {9, 5},          {10, 7},         {11, 9},
      {12, 6, 4, 1},   {13, 4, 3, 1},   {14, 5, 3, 1},   {15, 14},        {16, 15, 13, 4},
      {17, 14},        {18, 11},        {19, 6, 2, 1},   {20, 17},        {21, 19},
      {22, 21},        {23, 18},        {24, 23, 22, 17}, {25, 22},       {26, 6, 2, 1},
      {27, 5, 2, 1},   {28, 25},        {29, 27},        {30, 6, 4, 1},   {31, 28},
      {32, 22, 2, 1},
  };
  if (degree < 2 || degree > 32) throw ParameterError("no built-in maximal taps for degree " + std::to_string(degree));
  return kTable[degree - 2];
}

}  // namespace eop::cipher
