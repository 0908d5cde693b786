#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eop/error.hpp"
#include "eop/keysync/session.hpp"
#include "eop/tick.hpp"

namespace eop::sim {

enum class Scenario { Direct, ObfusPartial, ObfusFull };
enum class KeypadKind { Trivium, Lfsr };
enum class StimulusMode { Uniform, Random };
enum class TamperKind { GroundData, GroundClock, FakeClockPulse, HoldData };

inline const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::Direct: return "direct";
    case Scenario::ObfusPartial: return "obfus_partial";
    case Scenario::ObfusFull: return "obfus_full";
  }
  return "?";
}

inline const char* to_string(TamperKind k) {
  switch (k) {
    case TamperKind::GroundData: return "ground_data";
    case TamperKind::GroundClock: return "ground_clock";
    case TamperKind::FakeClockPulse: return "fake_clock_pulse";
    case TamperKind::HoldData: return "hold_data";
  }
  return "?";
}

inline const char* to_string(StimulusMode m) { return m == StimulusMode::Uniform ? "uniform" : "random"; }
inline const char* to_string(KeypadKind k) { return k == KeypadKind::Trivium ? "trivium" : "lfsr"; }

struct TopologyConfig {
  Scenario scenario = Scenario::Direct;
  unsigned lanes = 8;
  KeypadKind keypad = KeypadKind::Trivium;
  unsigned lfsr_degree = 16;
  std::uint64_t permutation_key = 0;  // key loaded into the permutation block
  std::uint64_t design_key = 0;       // key of the designed netlist mapping
  bool strobe = true;                 // unencrypted line toggled on every pulse

  unsigned hops() const { return scenario == Scenario::ObfusFull ? 2 : 1; }
};

struct StimulusConfig {
  StimulusMode mode = StimulusMode::Uniform;
  Tick base_period = 5;                    // 200 MHz at 1 ns per tick
  Tick period = 5;                         // uniform mode
  std::vector<Tick> lane_periods;          // random mode; drawn from the grid if empty
  std::vector<unsigned> frequencies_mhz;   // random mode grid
  std::uint64_t seed = 1;
};

struct ClockConfig {
  Tick thr = 0;
  Tick hold_window = 2;
  Tick delta = 1;
};

struct KeysyncConfig {
  keysync::Scheme scheme = keysync::Scheme::SelfUpdate;
  std::vector<keysync::SeedBits> first_seeds;  // one per hop; defaults if empty
  std::uint64_t generation = 0;                // power-ups already done before this one
  unsigned rsa_bits = 512;
  std::uint64_t entropy_seed = 2024;
};

struct TamperScenario {
  TamperKind kind = TamperKind::GroundData;
  std::vector<std::string> lines;  // default: the hop's bus (data kinds) or clock line
  unsigned hop = 0;
  Tick start = 0;
  Tick duration = 1;
  Tick jitter = 0;  // batch runs add a per-run offset in [0, jitter)
};

struct RunConfig {
  Tick horizon = 1000;
  Tick exec_start = 10;
  bool record_traces = true;
  std::size_t max_pending_events = 1u << 22;
};

struct ScenarioConfig {
  TopologyConfig topology;
  StimulusConfig stimulus;
  ClockConfig clock;
  KeysyncConfig keysync;
  RunConfig run;
  std::vector<TamperScenario> tampers;
};

// The frequency grid of the experiment, in MHz.
inline std::vector<unsigned> default_frequency_grid() {
  std::vector<unsigned> f;
  for (unsigned v = 5; v <= 195; v += 10) f.push_back(v);
  return f;
}

// Update period for frequency f: whole multiples of the base period, so that
// every flip lands on the base grid.
inline Tick period_for_frequency(unsigned f_mhz, Tick base_period, unsigned base_mhz = 200) {
  if (f_mhz == 0) throw ConfigError("frequency must be positive");
  const double ratio = double(base_mhz) / f_mhz;
  const auto mult = static_cast<Tick>(ratio + 0.5);
  return base_period * (mult < 1 ? 1 : mult);
}

inline void validate(const ScenarioConfig& c) {
  const auto& t = c.topology;
  if (t.lanes < 1 || t.lanes > 16) throw ConfigError("topology.lanes must be in 1..16");
  if (t.keypad == KeypadKind::Lfsr && (t.lfsr_degree < 2 || t.lfsr_degree > 32)) {
    throw ConfigError("topology.lfsr_degree must be in 2..32");
  }
  if (c.clock.delta < 1) throw ConfigError("clock.delta must be at least 1 tick");
  if (c.clock.hold_window <= c.clock.delta) throw ConfigError("clock.hold_window must exceed clock.delta");
  if (c.stimulus.base_period < 1 || c.stimulus.period < 1) throw ConfigError("stimulus periods must be >= 1 tick");
  if (c.stimulus.mode == StimulusMode::Uniform && t.lanes > 32) throw ConfigError("uniform stimulus supports up to 32 lanes");
  for (Tick p : c.stimulus.lane_periods) {
    if (p < 1) throw ConfigError("stimulus lane periods must be >= 1 tick");
  }
  if (!c.stimulus.lane_periods.empty() && c.stimulus.lane_periods.size() != t.lanes) {
    throw ConfigError("stimulus.lane_periods needs one entry per lane");
  }
  if (c.run.exec_start <= c.clock.thr) throw ConfigError("run.exec_start must exceed clock.thr");
  if (c.run.horizon < c.run.exec_start) throw ConfigError("run.horizon must not precede run.exec_start");
  if (c.keysync.scheme == keysync::Scheme::Rsa && c.keysync.rsa_bits < 16) throw ConfigError("keysync.rsa_bits must be >= 16");
  for (const auto& tm : c.tampers) {
    if (tm.duration < 1) throw ConfigError("tamper duration must be >= 1 tick");
    if (tm.hop >= t.hops()) throw ConfigError("tamper hop " + std::to_string(tm.hop) + " does not exist");
  }
}

}  // namespace eop::sim
