#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <random>
#include <thread>
#include <vector>

#include "eop/sim/simulation.hpp"

namespace eop::sim {

struct BatchSummary {
  std::vector<SimReport> runs;  // sorted by run index
  double mean_violations = 0.0;
  std::uint64_t min_violations = 0;
  std::uint64_t max_violations = 0;
  std::uint64_t total_mismatches = 0;
};

// Tick grid the sender's data edges sit on, relative to exec_start + delta.
inline Tick data_edge_period(const ScenarioConfig& c) {
  return c.stimulus.mode == StimulusMode::Uniform ? c.stimulus.period : c.stimulus.base_period;
}

// Config of run i: its own stimulus seed and, for tampers with jitter, a start
// offset drawn uniformly from [0, jitter). The injector runs on its own clock,
// so offsets landing exactly on a sender data edge are redrawn.
inline ScenarioConfig batch_run_config(const ScenarioConfig& base, std::uint64_t seed, unsigned i) {
  ScenarioConfig c = base;
  c.stimulus.seed = seed + i;
  std::seed_seq sseq{seed, std::uint64_t{i}, std::uint64_t{0x7a4d}};
  std::mt19937_64 rng(sseq);
  const Tick period = data_edge_period(c);
  const Tick edge = c.run.exec_start + c.clock.delta;
  for (auto& tm : c.tampers) {
    if (tm.jitter == 0) continue;
    std::vector<Tick> allowed;
    for (Tick off = 0; off < tm.jitter; ++off) {
      const Tick at = tm.start + off;
      const bool on_edge = at >= edge && (at - edge) % period == 0;
      if (!on_edge) allowed.push_back(off);
    }
    if (allowed.empty()) throw ConfigError("tamper jitter leaves no start tick off the sender data edges");
    tm.start += allowed[std::uniform_int_distribution<std::size_t>(0, allowed.size() - 1)(rng)];
    tm.jitter = 0;
  }
  return c;
}

// Independent seeded runs, spread over worker threads. Each run owns its
// simulation; results land in their index slot.
inline BatchSummary run_batch(const ScenarioConfig& base, unsigned repeat, std::uint64_t seed, unsigned threads = 0) {
  if (repeat < 1) throw ConfigError("repeat must be >= 1");
  validate(base);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, repeat);

  BatchSummary s;
  s.runs.resize(repeat);
  std::vector<std::exception_ptr> errors(repeat);
  std::atomic<unsigned> next{0};
  auto worker = [&] {
    for (unsigned i = next++; i < repeat; i = next++) {
      try {
        s.runs[i] = run_scenario(batch_run_config(base, seed, i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::uint64_t sum = 0;
  s.min_violations = s.runs.front().violations;
  for (const auto& r : s.runs) {
    sum += r.violations;
    s.min_violations = std::min(s.min_violations, r.violations);
    s.max_violations = std::max(s.max_violations, r.violations);
    s.total_mismatches += r.mismatches;
  }
  s.mean_violations = double(sum) / repeat;
  return s;
}

}  // namespace eop::sim
