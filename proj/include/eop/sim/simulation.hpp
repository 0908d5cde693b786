#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "eop/clockctl.hpp"
#include "eop/crypto_link.hpp"
#include "eop/keysync/session.hpp"
#include "eop/obfusc.hpp"
#include "eop/sim/config.hpp"
#include "eop/sim/stimulus.hpp"
#include "eop/sim/trace.hpp"

namespace eop::sim {

struct PhaseMark {
  std::string phase;
  Tick t = 0;
};

struct HopVerdict {
  unsigned hop = 0;
  clock::Verdict verdict;
};

struct TamperResult {
  TamperScenario scenario;
  std::uint64_t violations = 0;
};

struct SimReport {
  std::uint64_t mismatches = 0;
  std::uint64_t violations = 0;
  std::uint64_t events_processed = 0;
  std::uint64_t channel_events = 0;
  std::uint64_t plaintext_updates = 0;
  std::uint64_t compared = 0;
  std::uint64_t clock_missing = 0;
  std::uint64_t data_missing = 0;
  std::uint64_t superseded = 0;
  std::uint64_t unattributed = 0;
  std::vector<std::uint64_t> pulses;
  std::vector<std::uint64_t> hop_violations;
  std::vector<TamperResult> tampers;
  std::vector<PhaseMark> phase_log;
  std::vector<HopVerdict> tampered;
  std::vector<std::string> session_seeds;
  Trace trace;
};

inline std::string default_first_seed(unsigned hop) {
  return hop == 0 ? "5eed0000c0ffee00123456789abcdef013579bdf" : "a11ce0000bad5eed02468ace13579bdf0fedcba9";
}

class Simulation {
 public:
  explicit Simulation(ScenarioConfig cfg) : cfg_(std::move(cfg)) {
    validate(cfg_);
    build_lines();
    initialize();
  }

  const ScenarioConfig& config() const { return cfg_; }
  Tick now() const { return now_; }
  std::uint64_t violations() const {
    std::uint64_t v = 0;
    for (const auto& h : hops_) v += h.ver.violations();
    return v;
  }
  const Trace& trace() const { return trace_; }

  // Processes every event up to and including tick t.
  void run_until(Tick t) {
    while (!queue_.empty() && queue_.top().t <= t) process(pop());
    now_ = std::max(now_, t);
  }

  SimReport run() {
    run_until(cfg_.run.horizon);
    return finish();
  }

  // Pause: the sender's plaintext source is already stopped at the horizon;
  // drain what is in flight and flush the verifiers.
  SimReport finish() {
    while (!queue_.empty()) process(pop());
    for (unsigned h = 0; h < hops_.size(); ++h) note_verdicts(h, hops_[h].ver.flush());
    report_.violations = violations();
    report_.hop_violations.clear();
    report_.pulses.clear();
    for (const auto& h : hops_) {
      report_.hop_violations.push_back(h.ver.violations());
      report_.pulses.push_back(h.pulses);
    }
    report_.channel_events = channel_events_;
    report_.trace = trace_;
    return report_;
  }

  // Attacker access: force a channel line from tick t on, or let go of it.
  void drive(Tick t, const std::string& line, bool value) { push(t, kPrioInject, Ev::Drive, 0, writable(line), value ? 1 : 0); }
  void release(Tick t, const std::string& line) { push(t, kPrioInject, Ev::Drive, 0, writable(line), 2); }

  bool observe(const std::string& line) const { return state_[trace_.find(line)].observed; }
  bool observe(LineId id) const { return state_[id].observed; }

  std::uint64_t observe_word(const std::string& prefix) const {
    std::uint64_t w = 0;
    for (unsigned i = 0; i < cfg_.topology.lanes; ++i) {
      if (observe(prefix + "[" + std::to_string(i) + "]")) w |= std::uint64_t{1} << i;
    }
    return w;
  }

  LineId line_id(const std::string& name) const { return trace_.find(name); }

  LineId writable(const std::string& name) const {
    const LineId id = trace_.find(name);
    if (!trace_.lines[id].tamperable) throw ConfigError("line '" + name + "' cannot be driven from the board");
    return id;
  }

  const obfusc::Permutation& loaded_permutation() const { return loaded_perm_; }
  const obfusc::Permutation& design_permutation() const { return design_perm_; }

 private:
  enum class Ev { Phase, TamperBegin, TamperEnd, Drive, Stimulus, ClockLevel, SenderOutput, Settle, HoldExpiry, Compare };

  static constexpr int kPrioPhase = 0;
  static constexpr int kPrioInject = 1;
  static constexpr int kPrioStimulus = 2;
  static constexpr int kPrioCompare = 1000;
  static int prio_clock(unsigned hop) { return 3 + 10 * static_cast<int>(hop); }
  static int prio_output(unsigned hop) { return 4 + 10 * static_cast<int>(hop); }
  static int prio_settle(unsigned hop) { return 5 + 10 * static_cast<int>(hop); }
  static int prio_expiry(unsigned hop) { return 8 + 10 * static_cast<int>(hop); }

  struct Event {
    Tick t;
    int prio;
    std::uint64_t seq;
    Ev kind;
    unsigned hop;
    std::uint64_t a;
    std::uint64_t b;
  };

  struct Later {
    bool operator()(const Event& x, const Event& y) const {
      if (x.t != y.t) return x.t > y.t;
      if (x.prio != y.prio) return x.prio > y.prio;
      return x.seq > y.seq;
    }
  };

  struct LineState {
    bool genuine = false;
    bool observed = false;
    std::vector<std::pair<std::size_t, bool>> forced;  // (tamper index, value), last wins
    std::optional<bool> attacker;

    bool resolve() const {
      if (attacker) return *attacker;
      if (!forced.empty()) return forced.back().second;
      return genuine;
    }
  };

  struct Hop {
    link::LinkEndpoint tx;
    link::LinkEndpoint rx;
    clock::ClockGenerator gen;
    clock::ClockVerifier ver;
    LineId clk = 0;
    std::optional<LineId> strobe;
    std::vector<LineId> enc;
    std::uint64_t plain = 0;
    std::uint64_t rx_out = 0;
    bool strobe_level = false;
    Tick settle_at = ~Tick{0};
    std::uint64_t pulses = 0;
  };

  void push(Tick t, int prio, Ev kind, unsigned hop = 0, std::uint64_t a = 0, std::uint64_t b = 0) {
    if (queue_.size() >= cfg_.run.max_pending_events) {
      throw ResourceError("event queue exceeded " + std::to_string(cfg_.run.max_pending_events) + " pending events");
    }
    queue_.push({t, prio, seq_++, kind, hop, a, b});
  }

  Event pop() {
    Event e = queue_.top();
    queue_.pop();
    return e;
  }

  std::string lane_name(const std::string& base, unsigned i) const { return base + "[" + std::to_string(i) + "]"; }

  void build_lines() {
    const unsigned n = cfg_.topology.lanes;
    for (unsigned i = 0; i < n; ++i) plain_.push_back(trace_.add_line({lane_name("plain", i), false, false, -1}));
    hops_.resize(cfg_.topology.hops());
    for (unsigned h = 0; h < hops_.size(); ++h) {
      const std::string sfx = h == 0 ? "" : std::to_string(h + 1);
      Hop& hop = hops_[h];
      hop.clk = trace_.add_line({"clk" + sfx + "_ctrl", true, true, int(h)});
      if (cfg_.topology.strobe) hop.strobe = trace_.add_line({"enc" + sfx + "_strobe", true, true, int(h)});
      for (unsigned i = 0; i < n; ++i) hop.enc.push_back(trace_.add_line({lane_name("enc" + sfx, i), true, true, int(h)}));
      if (h == 0 && cfg_.topology.scenario == Scenario::ObfusPartial) {
        for (unsigned i = 0; i < n; ++i) out_.push_back(trace_.add_line({lane_name("obf", i), true, false, -1}));
      }
      if (h == 0 && cfg_.topology.scenario == Scenario::ObfusFull) {
        for (unsigned i = 0; i < n; ++i) mid_.push_back(trace_.add_line({lane_name("mid", i), false, false, -1}));
      }
    }
    if (cfg_.topology.scenario != Scenario::ObfusPartial) {
      for (unsigned i = 0; i < n; ++i) out_.push_back(trace_.add_line({lane_name("dec", i), false, false, -1}));
    }
    state_.resize(trace_.lines.size());
  }

  void initialize() {
    const auto& topo = cfg_.topology;
    report_.phase_log.push_back({"initialization", 0});
    try {
      loaded_perm_ = obfusc::permutation_from_key({topo.permutation_key, topo.lanes});
      design_perm_ = obfusc::permutation_from_key({topo.design_key, topo.lanes});
    } catch (const ParameterError& e) {
      throw ConfigError(std::string("topology: ") + e.what());
    }
    if (topo.scenario == Scenario::Direct) loaded_perm_ = design_perm_ = obfusc::Permutation::identity(topo.lanes);

    std::optional<keysync::AsymKeyPair> rsa;
    keysync::DeterministicEntropy trng(cfg_.keysync.entropy_seed);
    if (cfg_.keysync.scheme == keysync::Scheme::Rsa) rsa = keysync::generate_keypair(cfg_.keysync.rsa_bits, trng);
    for (unsigned h = 0; h < hops_.size(); ++h) {
      keysync::Session s;
      if (rsa) {
        s = keysync::establish_rsa(*rsa, trng, cfg_.keysync.generation);
      } else {
        keysync::SeedBits first;
        try {
          first = h < cfg_.keysync.first_seeds.size() ? cfg_.keysync.first_seeds[h]
                                                      : keysync::SeedBits::from_hex(default_first_seed(h));
        } catch (const ParameterError& e) {
          throw ConfigError(std::string("keysync seed: ") + e.what());
        }
        keysync::SelfUpdatingSeed tx({first, 0}), rx({first, 0});
        for (std::uint64_t g = 0; g < cfg_.keysync.generation; ++g) {
          tx.power_up();
          rx.power_up();
        }
        s = keysync::establish_self_update(tx, rx);
      }
      report_.session_seeds.push_back(s.seed.bits.to_hex());
      Hop& hop = hops_[h];
      if (topo.keypad == KeypadKind::Trivium) {
        hop.tx = link::LinkEndpoint::trivium(s.sender.key, s.sender.iv, topo.lanes);
        hop.rx = link::LinkEndpoint::trivium(s.receiver.key, s.receiver.iv, topo.lanes);
      } else {
        hop.tx = link::LinkEndpoint::lfsr_bank(s.sender.key, s.sender.iv, topo.lanes, topo.lfsr_degree);
        hop.rx = link::LinkEndpoint::lfsr_bank(s.receiver.key, s.receiver.iv, topo.lanes, topo.lfsr_degree);
      }
      hop.gen = clock::ClockGenerator(cfg_.clock.thr);
      hop.ver = clock::ClockVerifier(cfg_.clock.hold_window);
    }

    for (std::size_t i = 0; i < cfg_.tampers.size(); ++i) {
      const auto& tm = cfg_.tampers[i];
      tamper_lines_.push_back(resolve_targets(tm));
      report_.tampers.push_back({tm, 0});
      push(tm.start, kPrioInject, Ev::TamperBegin, tm.hop, i);
      const Tick end = tm.kind == TamperKind::FakeClockPulse ? tm.start + 1 : tm.start + tm.duration;
      push(end, kPrioInject, Ev::TamperEnd, tm.hop, i);
    }

    stimulus_.emplace(cfg_.stimulus, topo.lanes, cfg_.run.exec_start);
    push(cfg_.run.exec_start, kPrioPhase, Ev::Phase, 0, 1);
    push(cfg_.run.horizon, kPrioPhase, Ev::Phase, 0, 2);
    schedule_stimulus();
  }

  std::vector<LineId> resolve_targets(const TamperScenario& tm) const {
    const Hop& hop = hops_[tm.hop];
    std::vector<LineId> ids;
    if (tm.lines.empty()) {
      if (tm.kind == TamperKind::GroundClock || tm.kind == TamperKind::FakeClockPulse) {
        ids.push_back(hop.clk);
      } else {
        ids = hop.enc;
        if (hop.strobe) ids.push_back(*hop.strobe);
      }
      return ids;
    }
    for (const auto& name : tm.lines) {
      const LineId id = trace_.find(name);
      if (!trace_.lines[id].tamperable) throw ConfigError("line '" + name + "' is not an encrypted bus or clock line");
      ids.push_back(id);
    }
    return ids;
  }

  void schedule_stimulus() {
    const Tick t = stimulus_->next_due();
    if (t < cfg_.run.horizon) push(t, kPrioStimulus, Ev::Stimulus);
  }

  void record(Tick t, LineId id, bool v) {
    if (trace_.lines[id].channel_visible) ++channel_events_;
    if (cfg_.run.record_traces) trace_.events.push_back({t, id, v});
  }

  void set_internal(Tick t, LineId id, bool v) {
    auto& s = state_[id];
    s.genuine = v;
    if (s.observed != v) {
      s.observed = v;
      record(t, id, v);
    }
  }

  void request_settle(unsigned h, Tick t) {
    Hop& hop = hops_[h];
    if (hop.settle_at == t) return;
    hop.settle_at = t;
    push(t, prio_settle(h), Ev::Settle, h);
  }

  void settle_line(LineId id, Tick t) {
    const int h = trace_.lines[id].hop;
    if (h >= 0) request_settle(static_cast<unsigned>(h), t);
  }

  void process(const Event& e) {
    now_ = e.t;
    ++report_.events_processed;
    switch (e.kind) {
      case Ev::Phase:
        report_.phase_log.push_back({e.a == 1 ? "execution" : "pause", e.t});
        break;
      case Ev::TamperBegin: tamper_begin(e.a, e.t); break;
      case Ev::TamperEnd: tamper_end(e.a, e.t); break;
      case Ev::Drive: {
        auto& s = state_[e.a];
        if (e.b == 2) {
          s.attacker.reset();
        } else {
          s.attacker = e.b == 1;
        }
        settle_line(static_cast<LineId>(e.a), e.t);
        break;
      }
      case Ev::Stimulus: on_stimulus(e.t); break;
      case Ev::ClockLevel:
        state_[hops_[e.hop].clk].genuine = e.a != 0;
        request_settle(e.hop, e.t);
        break;
      case Ev::SenderOutput: {
        Hop& hop = hops_[e.hop];
        for (unsigned i = 0; i < hop.enc.size(); ++i) state_[hop.enc[i]].genuine = (e.a >> i) & 1U;
        if (hop.strobe) state_[*hop.strobe].genuine = e.b != 0;
        request_settle(e.hop, e.t);
        break;
      }
      case Ev::Settle: settle(e.hop, e.t); break;
      case Ev::HoldExpiry: note_verdicts(e.hop, hops_[e.hop].ver.expire(e.t)); break;
      case Ev::Compare:
        ++report_.compared;
        if (final_word() != e.a) ++report_.mismatches;
        break;
    }
  }

  void tamper_begin(std::size_t i, Tick t) {
    const auto& tm = cfg_.tampers[i];
    for (LineId id : tamper_lines_[i]) {
      auto& s = state_[id];
      bool v = false;
      if (tm.kind == TamperKind::HoldData) v = s.observed;
      if (tm.kind == TamperKind::FakeClockPulse) v = true;
      s.forced.emplace_back(i, v);
      settle_line(id, t);
    }
  }

  void tamper_end(std::size_t i, Tick t) {
    for (LineId id : tamper_lines_[i]) {
      auto& f = state_[id].forced;
      f.erase(std::remove_if(f.begin(), f.end(), [&](const auto& p) { return p.first == i; }), f.end());
      settle_line(id, t);
    }
  }

  void on_stimulus(Tick t) {
    const auto flips = stimulus_->step(t);
    schedule_stimulus();
    if (flips.empty()) return;
    for (const auto& f : flips) set_internal(t, plain_[f.lane], f.value);
    ++report_.plaintext_updates;
    const std::uint64_t p = stimulus_->word();
    push(t + cfg_.clock.delta * hops_.size(), kPrioCompare, Ev::Compare, 0, expected_output(p));
    sender_input(0, t, p);
  }

  std::uint64_t expected_output(std::uint64_t p) const {
    return obfusc::permute_word(design_perm_, p, cfg_.topology.lanes);
  }

  void sender_input(unsigned h, Tick t, std::uint64_t word) {
    Hop& hop = hops_[h];
    hop.plain = word;
    if (auto pulse = hop.gen.on_flip(t)) {
      hop.tx.advance_keypad();
      ++hop.pulses;
      push(pulse->rise, prio_clock(h), Ev::ClockLevel, h, 1);
      push(pulse->rise + pulse->width, prio_clock(h), Ev::ClockLevel, h, 0);
      hop.strobe_level = !hop.strobe_level;
    }
    const link::CipherWord c = link::encrypt_word(hop.tx, {word, cfg_.topology.lanes, t});
    push(t + cfg_.clock.delta, prio_output(h), Ev::SenderOutput, h, c.bits, hop.strobe_level ? 1 : 0);
  }

  void settle(unsigned h, Tick t) {
    Hop& hop = hops_[h];
    bool clk_rise = false, data_flip = false;
    auto update = [&](LineId id) {
      auto& s = state_[id];
      const bool v = s.resolve();
      if (v == s.observed) return false;
      s.observed = v;
      record(t, id, v);
      return true;
    };
    if (update(hop.clk) && state_[hop.clk].observed) clk_rise = true;
    if (hop.strobe && update(*hop.strobe)) data_flip = true;
    for (LineId id : hop.enc) data_flip = update(id) || data_flip;

    if (clk_rise) {
      note_verdicts(h, hop.ver.on_clock_flip(t));
      push(t + cfg_.clock.hold_window, prio_expiry(h), Ev::HoldExpiry, h);
      hop.rx.advance_keypad();
    }
    if (data_flip) {
      note_verdicts(h, hop.ver.on_data_flip(t));
      std::uint64_t e = 0;
      for (unsigned i = 0; i < hop.enc.size(); ++i) e |= std::uint64_t{state_[hop.enc[i]].observed} << i;
      const std::uint64_t p = link::decrypt_word(hop.rx, {e, cfg_.topology.lanes, t}).bits;
      if (p != hop.rx_out) {
        hop.rx_out = p;
        deliver(h, t, p);
      }
    }
  }

  void deliver(unsigned h, Tick t, std::uint64_t p) {
    const unsigned n = cfg_.topology.lanes;
    if (cfg_.topology.scenario == Scenario::Direct || h == 1) {
      for (unsigned i = 0; i < n; ++i) set_internal(t, out_[i], (p >> i) & 1U);
      return;
    }
    const std::uint64_t routed = obfusc::permute_word(loaded_perm_, p, n);
    if (cfg_.topology.scenario == Scenario::ObfusPartial) {
      for (unsigned i = 0; i < n; ++i) set_internal(t, out_[i], (routed >> i) & 1U);
      return;
    }
    for (unsigned i = 0; i < n; ++i) set_internal(t, mid_[i], (routed >> i) & 1U);
    if (routed != hops_[1].plain) sender_input(1, t, routed);
  }

  std::uint64_t final_word() const {
    std::uint64_t w = 0;
    for (unsigned i = 0; i < out_.size(); ++i) w |= std::uint64_t{state_[out_[i]].observed} << i;
    return w;
  }

  void note_verdicts(unsigned h, const std::vector<clock::Verdict>& vs) {
    for (const auto& v : vs) {
      if (v.status != clock::VerStatus::Tampered) continue;
      switch (v.cause) {
        case clock::Cause::ClockMissing: ++report_.clock_missing; break;
        case clock::Cause::DataMissing: ++report_.data_missing; break;
        case clock::Cause::Superseded: ++report_.superseded; break;
        case clock::Cause::None: break;
      }
      report_.tampered.push_back({h, v});
      bool attributed = false;
      for (std::size_t i = 0; i < cfg_.tampers.size() && !attributed; ++i) {
        const auto& tm = cfg_.tampers[i];
        const Tick end = tm.start + tm.duration + cfg_.clock.hold_window + cfg_.clock.delta;
        if (tm.hop == h && v.tick >= tm.start && v.tick < end) {
          ++report_.tampers[i].violations;
          attributed = true;
        }
      }
      if (!attributed) ++report_.unattributed;
    }
  }

  ScenarioConfig cfg_;
  Trace trace_;
  std::vector<LineState> state_;
  std::vector<LineId> plain_, out_, mid_;
  std::vector<Hop> hops_;
  std::vector<std::vector<LineId>> tamper_lines_;
  std::optional<StimulusGenerator> stimulus_;
  obfusc::Permutation loaded_perm_, design_perm_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t seq_ = 0;
  std::uint64_t channel_events_ = 0;
  Tick now_ = 0;
  SimReport report_;
};

inline SimReport run_scenario(const ScenarioConfig& cfg) { return Simulation(cfg).run(); }

}  // namespace eop::sim
