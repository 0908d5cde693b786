#pragma once

#include <cstdint>

namespace eop::attacks {

enum class AttackStrategy { Naive, FakeClock, KeystreamRecovery };

inline const char* to_string(AttackStrategy s) {
  switch (s) {
    case AttackStrategy::Naive: return "naive";
    case AttackStrategy::FakeClock: return "fake_clock";
    case AttackStrategy::KeystreamRecovery: return "keystream_recovery";
  }
  return "?";
}

struct AttackConfig {
  AttackStrategy strategy = AttackStrategy::KeystreamRecovery;
  unsigned lane = 0;                        // injected input for naive
  std::uint64_t max_guesses = std::uint64_t{1} << 24;
  std::uint64_t horizon = 1000;             // keypad bits predicted per output
  bool taps_known = true;                   // the linear structure is public
  unsigned hypothesis_degree = 24;          // linear model tried against a non-linear keypad
  unsigned match_pulses = 32;               // injected pulses per lane while matching
};

}  // namespace eop::attacks
