#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "eop/cipher/lfsr.hpp"
#include "eop/sim/config.hpp"

namespace eop::sim {

struct LaneFlip {
  unsigned lane;
  bool value;
};

// Plaintext source of the sender chip.
//
// Uniform mode: all lanes update together every `period` ticks. Lane i reads
// the same maximal-length sequence i steps ahead of lane 0, so the lane vector
// is a sliding window that changes on every update.
//
// Random mode: each lane has its own LFSR and update period; a lane flips only
// when its next bit differs from the current value.
class StimulusGenerator {
 public:
  StimulusGenerator(const StimulusConfig& cfg, unsigned lanes, Tick start) : lanes_(lanes) {
    std::mt19937_64 rng(cfg.seed);
    if (cfg.mode == StimulusMode::Uniform) {
      const unsigned d = lanes < 2 ? 2 : lanes;
      std::uint64_t reg = rng() & ((1ULL << d) - 1);
      if (reg == 0) reg = 1;
      shared_ = cipher::LfsrState(cipher::maximal_taps(d), reg);
      for (unsigned i = 0; i + 1 < lanes; ++i) window_.push_back(shared_.step());
      periods_.assign(lanes, cfg.period);
    } else {
      periods_ = cfg.lane_periods;
      if (periods_.empty()) {
        const auto grid = cfg.frequencies_mhz.empty() ? default_frequency_grid() : cfg.frequencies_mhz;
        for (unsigned i = 0; i < lanes; ++i) {
          periods_.push_back(period_for_frequency(grid[rng() % grid.size()], cfg.base_period));
        }
      }
      for (unsigned i = 0; i < lanes; ++i) {
        std::uint64_t reg = rng() & 0xFFFF;
        if (reg == 0) reg = 1;
        lanes_lfsr_.emplace_back(cipher::maximal_taps(16), reg);
      }
    }
    next_.assign(lanes, start);
  }

  Tick next_due() const {
    Tick t = std::numeric_limits<Tick>::max();
    for (Tick n : next_) t = std::min(t, n);
    return t;
  }

  // Steps every lane due at t and returns the resulting value changes.
  std::vector<LaneFlip> step(Tick t) {
    std::vector<LaneFlip> flips;
    if (!lanes_lfsr_.empty()) {
      for (unsigned i = 0; i < lanes_; ++i) {
        if (next_[i] != t) continue;
        next_[i] += periods_[i];
        const bool b = lanes_lfsr_[i].step();
        if (b != bit(i)) flips.push_back({i, b});
      }
    } else {
      if (next_[0] != t) return flips;
      window_.push_back(shared_.step());
      for (unsigned i = 0; i < lanes_; ++i) {
        next_[i] += periods_[i];
        const bool b = window_[window_.size() - lanes_ + i];
        if (b != bit(i)) flips.push_back({i, b});
      }
      window_.erase(window_.begin());
    }
    for (const auto& f : flips) word_ ^= std::uint64_t{1} << f.lane;
    return flips;
  }

  std::uint64_t word() const { return word_; }
  const std::vector<Tick>& periods() const { return periods_; }

 private:
  bool bit(unsigned i) const { return (word_ >> i) & 1U; }

  unsigned lanes_;
  std::uint64_t word_ = 0;
  std::vector<Tick> periods_;
  std::vector<Tick> next_;
  cipher::LfsrState shared_;
  std::vector<bool> window_;
  std::vector<cipher::LfsrState> lanes_lfsr_;
};

}  // namespace eop::sim
