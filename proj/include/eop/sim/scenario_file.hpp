#pragma once

#include <toml.hpp>

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "eop/attacks/strategy.hpp"
#include "eop/error.hpp"
#include "eop/sim/config.hpp"

namespace eop::sim {

using attacks::AttackConfig;
using attacks::AttackStrategy;

struct Expect {
  std::optional<std::uint64_t> violations;
  std::optional<std::uint64_t> mismatches;
  std::optional<std::pair<double, double>> mean_violations;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> run_violations;
  std::optional<std::string> outcome;
};

struct ScenarioFile {
  ScenarioConfig config;
  std::optional<Expect> expect;
  std::optional<AttackConfig> attack;
  unsigned repeat = 1;
};

namespace detail {

inline void check_keys(const toml::table& t, const std::string& section, const std::set<std::string>& allowed) {
  for (const auto& [k, v] : t) {
    if (!allowed.count(std::string(k.str()))) {
      const auto& src = v.source();
      throw ConfigError("line " + std::to_string(src.begin.line) + ": unknown key '" + std::string(k.str()) +
                        "' in [" + section + "]");
    }
  }
}

template <class T>
T get(const toml::table& t, const std::string& key, T fallback) {
  const toml::node* n = t.get(key);
  if (!n) return fallback;
  if constexpr (std::is_same_v<T, bool>) {
    if (auto v = n->value<bool>()) return *v;
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (auto v = n->value<std::string>()) return *v;
  } else if constexpr (std::is_floating_point_v<T>) {
    if (auto v = n->value<double>()) return static_cast<T>(*v);
  } else {
    if (auto v = n->value<std::int64_t>()) {
      if (*v < 0) throw ConfigError("line " + std::to_string(n->source().begin.line) + ": '" + key + "' must be non-negative");
      return static_cast<T>(*v);
    }
  }
  throw ConfigError("line " + std::to_string(n->source().begin.line) + ": '" + key + "' has the wrong type");
}

template <class T>
std::vector<T> get_list(const toml::table& t, const std::string& key) {
  std::vector<T> out;
  const toml::node* n = t.get(key);
  if (!n) return out;
  const toml::array* arr = n->as_array();
  if (!arr) throw ConfigError("line " + std::to_string(n->source().begin.line) + ": '" + key + "' must be an array");
  for (const auto& e : *arr) {
    if constexpr (std::is_same_v<T, std::string>) {
      auto v = e.value<std::string>();
      if (!v) throw ConfigError("line " + std::to_string(e.source().begin.line) + ": '" + key + "' entries must be strings");
      out.push_back(*v);
    } else if constexpr (std::is_floating_point_v<T>) {
      auto v = e.value<double>();
      if (!v) throw ConfigError("line " + std::to_string(e.source().begin.line) + ": '" + key + "' entries must be numbers");
      out.push_back(static_cast<T>(*v));
    } else {
      auto v = e.value<std::int64_t>();
      if (!v || *v < 0) throw ConfigError("line " + std::to_string(e.source().begin.line) + ": '" + key + "' entries must be non-negative integers");
      out.push_back(static_cast<T>(*v));
    }
  }
  return out;
}

inline const toml::table* section(const toml::table& root, const std::string& name) {
  const toml::node* n = root.get(name);
  if (!n) return nullptr;
  if (!n->is_table()) throw ConfigError("line " + std::to_string(n->source().begin.line) + ": [" + name + "] must be a table");
  return n->as_table();
}

template <class E>
E parse_enum(const std::string& value, const std::string& key, std::initializer_list<std::pair<const char*, E>> options) {
  for (const auto& [name, e] : options) {
    if (value == name) return e;
  }
  std::string names;
  for (const auto& [name, e] : options) names += std::string(names.empty() ? "" : ", ") + name;
  throw ConfigError("'" + key + "' must be one of: " + names + " (got '" + value + "')");
}

}  // namespace detail

inline ScenarioFile parse_scenario(const toml::table& root) {
  using namespace detail;
  ScenarioFile f;
  ScenarioConfig& c = f.config;
  check_keys(root, "root", {"topology", "stimulus", "clock", "keysync", "run", "tamper", "expect", "attack"});

  if (const auto* t = section(root, "topology")) {
    check_keys(*t, "topology", {"scenario", "lanes", "keypad", "lfsr_degree", "permutation_key", "design_key", "strobe"});
    c.topology.scenario = parse_enum<Scenario>(get<std::string>(*t, "scenario", "direct"), "topology.scenario",
                                               {{"direct", Scenario::Direct},
                                                {"obfus_partial", Scenario::ObfusPartial},
                                                {"obfus_full", Scenario::ObfusFull}});
    c.topology.lanes = get<unsigned>(*t, "lanes", c.topology.lanes);
    c.topology.keypad = parse_enum<KeypadKind>(get<std::string>(*t, "keypad", "trivium"), "topology.keypad",
                                               {{"trivium", KeypadKind::Trivium}, {"lfsr", KeypadKind::Lfsr}});
    c.topology.lfsr_degree = get<unsigned>(*t, "lfsr_degree", c.topology.lfsr_degree);
    c.topology.permutation_key = get<std::uint64_t>(*t, "permutation_key", 0);
    c.topology.design_key = get<std::uint64_t>(*t, "design_key", c.topology.permutation_key);
    c.topology.strobe = get<bool>(*t, "strobe", true);
  }
  if (const auto* t = section(root, "stimulus")) {
    check_keys(*t, "stimulus", {"mode", "base_period", "period", "frequency_mhz", "lane_periods", "frequencies_mhz", "seed"});
    c.stimulus.mode = parse_enum<StimulusMode>(get<std::string>(*t, "mode", "uniform"), "stimulus.mode",
                                               {{"uniform", StimulusMode::Uniform}, {"random", StimulusMode::Random}});
    c.stimulus.base_period = get<Tick>(*t, "base_period", c.stimulus.base_period);
    c.stimulus.period = get<Tick>(*t, "period", c.stimulus.base_period);
    if (t->get("frequency_mhz")) {
      c.stimulus.period = period_for_frequency(get<unsigned>(*t, "frequency_mhz", 200), c.stimulus.base_period);
    }
    c.stimulus.lane_periods = get_list<Tick>(*t, "lane_periods");
    c.stimulus.frequencies_mhz = get_list<unsigned>(*t, "frequencies_mhz");
    c.stimulus.seed = get<std::uint64_t>(*t, "seed", c.stimulus.seed);
  }
  if (const auto* t = section(root, "clock")) {
    check_keys(*t, "clock", {"thr", "hold_window", "delta"});
    c.clock.thr = get<Tick>(*t, "thr", c.clock.thr);
    c.clock.hold_window = get<Tick>(*t, "hold_window", c.clock.hold_window);
    c.clock.delta = get<Tick>(*t, "delta", c.clock.delta);
  }
  if (const auto* t = section(root, "keysync")) {
    check_keys(*t, "keysync", {"scheme", "first_seeds", "generation", "rsa_bits", "entropy_seed"});
    c.keysync.scheme = parse_enum<keysync::Scheme>(get<std::string>(*t, "scheme", "self_update"), "keysync.scheme",
                                                   {{"rsa", keysync::Scheme::Rsa}, {"self_update", keysync::Scheme::SelfUpdate}});
    for (const auto& hex : get_list<std::string>(*t, "first_seeds")) {
      try {
        c.keysync.first_seeds.push_back(keysync::SeedBits::from_hex(hex));
      } catch (const ParameterError& e) {
        throw ConfigError(std::string("keysync.first_seeds: ") + e.what());
      }
    }
    c.keysync.generation = get<std::uint64_t>(*t, "generation", 0);
    c.keysync.rsa_bits = get<unsigned>(*t, "rsa_bits", c.keysync.rsa_bits);
    c.keysync.entropy_seed = get<std::uint64_t>(*t, "entropy_seed", c.keysync.entropy_seed);
  }
  if (const auto* t = section(root, "run")) {
    check_keys(*t, "run", {"horizon", "exec_start", "traces", "max_pending_events", "repeat"});
    c.run.horizon = get<Tick>(*t, "horizon", c.run.horizon);
    c.run.exec_start = get<Tick>(*t, "exec_start", c.run.exec_start);
    c.run.record_traces = get<bool>(*t, "traces", c.run.record_traces);
    c.run.max_pending_events = get<std::size_t>(*t, "max_pending_events", c.run.max_pending_events);
    f.repeat = get<unsigned>(*t, "repeat", 1);
  }
  if (const toml::node* n = root.get("tamper")) {
    const toml::array* arr = n->as_array();
    if (!arr) throw ConfigError("line " + std::to_string(n->source().begin.line) + ": use [[tamper]] for tamper entries");
    for (const auto& e : *arr) {
      const toml::table* t = e.as_table();
      if (!t) throw ConfigError("line " + std::to_string(e.source().begin.line) + ": tamper entry must be a table");
      check_keys(*t, "tamper", {"kind", "lines", "hop", "start", "duration", "jitter"});
      TamperScenario tm;
      tm.kind = parse_enum<TamperKind>(get<std::string>(*t, "kind", ""), "tamper.kind",
                                       {{"ground_data", TamperKind::GroundData},
                                        {"ground_clock", TamperKind::GroundClock},
                                        {"fake_clock_pulse", TamperKind::FakeClockPulse},
                                        {"hold_data", TamperKind::HoldData}});
      tm.lines = get_list<std::string>(*t, "lines");
      tm.hop = get<unsigned>(*t, "hop", 0);
      tm.start = get<Tick>(*t, "start", 0);
      tm.duration = get<Tick>(*t, "duration", 1);
      tm.jitter = get<Tick>(*t, "jitter", 0);
      c.tampers.push_back(tm);
    }
  }
  if (const auto* t = section(root, "expect")) {
    check_keys(*t, "expect", {"violations", "mismatches", "mean_violations", "run_violations", "outcome"});
    Expect x;
    if (t->get("violations")) x.violations = get<std::uint64_t>(*t, "violations", 0);
    if (t->get("mismatches")) x.mismatches = get<std::uint64_t>(*t, "mismatches", 0);
    if (t->get("mean_violations")) {
      const auto v = get_list<double>(*t, "mean_violations");
      if (v.size() != 2) throw ConfigError("expect.mean_violations must be [low, high]");
      x.mean_violations = {v[0], v[1]};
    }
    if (t->get("run_violations")) {
      const auto v = get_list<std::uint64_t>(*t, "run_violations");
      if (v.size() != 2) throw ConfigError("expect.run_violations must be [low, high]");
      x.run_violations = {v[0], v[1]};
    }
    if (t->get("outcome")) x.outcome = get<std::string>(*t, "outcome", "");
    f.expect = x;
  }
  if (const auto* t = section(root, "attack")) {
    check_keys(*t, "attack", {"strategy", "lane", "max_guesses", "horizon", "taps_known", "hypothesis_degree", "match_pulses"});
    AttackConfig a;
    a.strategy = parse_enum<AttackStrategy>(get<std::string>(*t, "strategy", "keystream_recovery"), "attack.strategy",
                                            {{"naive", AttackStrategy::Naive},
                                             {"fake_clock", AttackStrategy::FakeClock},
                                             {"keystream_recovery", AttackStrategy::KeystreamRecovery}});
    a.lane = get<unsigned>(*t, "lane", 0);
    a.max_guesses = get<std::uint64_t>(*t, "max_guesses", a.max_guesses);
    a.horizon = get<std::uint64_t>(*t, "horizon", a.horizon);
    a.taps_known = get<bool>(*t, "taps_known", true);
    a.hypothesis_degree = get<unsigned>(*t, "hypothesis_degree", a.hypothesis_degree);
    a.match_pulses = get<unsigned>(*t, "match_pulses", a.match_pulses);
    if (a.max_guesses < 1) throw ConfigError("attack.max_guesses must be >= 1");
    if (a.hypothesis_degree < 2 || a.hypothesis_degree > 32) throw ConfigError("attack.hypothesis_degree must be in 2..32");
    if (a.match_pulses < 2) throw ConfigError("attack.match_pulses must be >= 2");
    if (a.lane >= c.topology.lanes) throw ConfigError("attack.lane must name an existing lane");
    f.attack = a;
  }
  validate(c);
  return f;
}

inline ScenarioFile parse_scenario_text(std::string_view text, const std::string& source = "config") {
  try {
    return parse_scenario(toml::parse(text, source));
  } catch (const toml::parse_error& e) {
    const auto& src = e.source();
    throw ConfigError(source + ":" + std::to_string(src.begin.line) + ":" + std::to_string(src.begin.column) + ": " +
                      std::string(e.description()));
  }
}

inline ScenarioFile load_scenario(const std::string& path) {
  toml::table root;
  try {
    root = toml::parse_file(path);
  } catch (const toml::parse_error& e) {
    const auto& src = e.source();
    if (src.begin.line == 0) throw IoError(path, std::string(e.description()));
    throw ConfigError(path + ":" + std::to_string(src.begin.line) + ":" + std::to_string(src.begin.column) + ": " +
                      std::string(e.description()));
  }
  try {
    return parse_scenario(root);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace eop::sim
