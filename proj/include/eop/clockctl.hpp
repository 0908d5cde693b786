#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eop/error.hpp"
#include "eop/tick.hpp"

namespace eop::clock {

struct Pulse {
  Tick rise = 0;
  Tick width = 1;
};

// Control-clock generation: a pulse for every plaintext flip that is more
// than `thr` ticks after the previous one.
class ClockGenerator {
 public:
  explicit ClockGenerator(Tick thr = 0) : thr_(thr) {}

  std::optional<Pulse> on_flip(Tick t) {
    if (t < t1_) throw ContractError("clockgen: flip at " + std::to_string(t) + " before " + std::to_string(t1_));
    t0_ = t1_;
    t1_ = t;
    if (t1_ - t0_ > thr_) return Pulse{t, 1};
    return std::nullopt;
  }

  Tick t0() const { return t0_; }
  Tick t1() const { return t1_; }
  Tick thr() const { return thr_; }

 private:
  Tick t0_ = 0;
  Tick t1_ = 0;
  Tick thr_;
};

inline std::pair<ClockGenerator, std::optional<Pulse>> clockgen_on_flip(ClockGenerator g, Tick t) {
  auto p = g.on_flip(t);
  return {g, p};
}

enum class VerStatus { Safe, Tampered };

enum class EventKind { Clock, Data };

enum class Cause {
  None,
  DataMissing,   // a clock flip got no data flip inside its hold window
  ClockMissing,  // two data flips with no clock flip between them
  Superseded,    // a second clock flip arrived while the first was still waiting
};

inline const char* to_string(VerStatus s) { return s == VerStatus::Safe ? "Safe" : "Tampered"; }
inline const char* to_string(EventKind k) { return k == EventKind::Clock ? "clock" : "data"; }
inline const char* to_string(Cause c) {
  switch (c) {
    case Cause::None: return "none";
    case Cause::DataMissing: return "data_missing";
    case Cause::ClockMissing: return "clock_missing";
    case Cause::Superseded: return "superseded";
  }
  return "?";
}

struct Verdict {
  Tick tick = 0;         // time of the evaluated event
  Tick resolved_at = 0;  // when the status became known
  EventKind kind = EventKind::Data;
  VerStatus status = VerStatus::Safe;
  Cause cause = Cause::None;
  friend bool operator==(const Verdict&, const Verdict&) = default;
};

// Control-clock verification.
//
// Data rule: a data flip is Safe iff a clock flip lies between it and the
// previous data flip (t0_data <= t_clk <= t1_data).
// Hold rule: a clock flip is Safe iff a data flip follows within
// (t_clk, t_clk + hold_window].
//
// A data flip that fails the data rule after the previous hold window has
// closed is remembered as an early flip. If the next clock flip then gets no
// data flip of its own, the early flip is taken as its response, so a single
// displaced edge is counted once rather than twice.
class ClockVerifier {
 public:
  explicit ClockVerifier(Tick hold_window = 2) : hold_(hold_window) {
    if (hold_window < 1) throw ParameterError("hold window must be at least 1 tick");
  }

  // Resolves any hold that expired before `now`, then records the clock flip.
  std::vector<Verdict> on_clock_flip(Tick t) {
    if (t < t_clk_ || t < last_) throw ContractError("clockver: clock flip at " + std::to_string(t) + " out of order");
    std::vector<Verdict> out;
    expire_before(t, out);
    if (pending_) {
      out.push_back(resolve_hold(t, Cause::Superseded));
    }
    t_clk_ = t;
    pending_ = t;
    last_ = t;
    return out;
  }

  std::vector<Verdict> on_data_flip(Tick t) {
    if (t < t1_data_ || t < last_) throw ContractError("clockver: data flip at " + std::to_string(t) + " out of order");
    std::vector<Verdict> out;
    expire_before(t, out);
    last_ = t;
    t0_data_ = t1_data_;
    t1_data_ = t;

    if (pending_ && t > *pending_ && t <= *pending_ + hold_) {
      out.push_back({*pending_, t, EventKind::Clock, VerStatus::Safe, Cause::None});
      pending_.reset();
      early_.reset();
    }

    Verdict v{t, t, EventKind::Data, VerStatus::Safe, Cause::None};
    if (!(t0_data_ <= t_clk_ && t_clk_ <= t1_data_)) {
      v.status = VerStatus::Tampered;
      v.cause = Cause::ClockMissing;
      ++violations_;
      if (!pending_ && t > t_clk_ + hold_) early_ = t;
    }
    out.push_back(v);
    log(out);
    return out;
  }

  // Resolves a hold whose window has fully elapsed by `now`.
  std::vector<Verdict> expire(Tick now) {
    std::vector<Verdict> out;
    if (pending_ && now >= *pending_ + hold_) out.push_back(resolve_hold(now, Cause::DataMissing));
    log(out);
    return out;
  }

  // Resolves whatever is still pending, as at the end of a run.
  std::vector<Verdict> flush() {
    std::vector<Verdict> out;
    if (pending_) out.push_back(resolve_hold(std::max(last_, *pending_ + hold_), Cause::DataMissing));
    log(out);
    return out;
  }

  std::uint64_t violations() const { return violations_; }
  Tick t_clk() const { return t_clk_; }
  Tick t0_data() const { return t0_data_; }
  Tick t1_data() const { return t1_data_; }
  Tick hold_window() const { return hold_; }
  bool pending_hold() const { return pending_.has_value(); }
  const std::vector<Verdict>& tampered_log() const { return tampered_; }

 private:
  void expire_before(Tick now, std::vector<Verdict>& out) {
    if (pending_ && now > *pending_ + hold_) out.push_back(resolve_hold(*pending_ + hold_, Cause::DataMissing));
  }

  Verdict resolve_hold(Tick at, Cause cause) {
    Verdict v{*pending_, at, EventKind::Clock, VerStatus::Tampered, cause};
    if (cause == Cause::DataMissing && early_ && *early_ < *pending_) {
      v.status = VerStatus::Safe;
      v.cause = Cause::None;
    } else {
      ++violations_;
    }
    early_.reset();
    pending_.reset();
    if (v.status == VerStatus::Tampered) tampered_.push_back(v);
    return v;
  }

  void log(const std::vector<Verdict>& vs) {
    for (const auto& v : vs) {
      if (v.status == VerStatus::Tampered && v.kind == EventKind::Data) tampered_.push_back(v);
    }
  }

  Tick hold_;
  Tick t_clk_ = 0;
  Tick t0_data_ = 0;
  Tick t1_data_ = 0;
  Tick last_ = 0;
  std::optional<Tick> pending_;
  std::optional<Tick> early_;
  std::uint64_t violations_ = 0;
  std::vector<Verdict> tampered_;
};

}  // namespace eop::clock
