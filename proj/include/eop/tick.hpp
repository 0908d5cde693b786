#pragma once

#include <cstdint>

namespace eop {

// Simulation time. One tick is 1 ns at the default reporting scale.
using Tick = std::uint64_t;

}  // namespace eop
