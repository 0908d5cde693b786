#pragma once

#include "eop/error.hpp"

namespace eop::cipher {

struct GateCount {
  unsigned flip_flops = 0;
  unsigned and_gates = 0;
  unsigned xor_gates = 0;
  friend bool operator==(const GateCount&, const GateCount&) = default;
};

// Hardware cost of an n-bit-wide Trivium: the state register is shared, the
// update logic is replicated per output bit.
inline GateCount gate_count_estimate(unsigned n) {
  if (n < 1 || n > 64) throw ParameterError("width must be in 1..64");
  return {288, 3 * n, 11 * n};
}

}  // namespace eop::cipher
