#pragma once

#include <nlohmann/json.hpp>

#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "eop/sim/simulation.hpp"

namespace eop::sim {

inline nlohmann::ordered_json verdict_json(const clock::Verdict& v) {
  return {{"tick", v.tick},
          {"resolved_at", v.resolved_at},
          {"event", clock::to_string(v.kind)},
          {"status", clock::to_string(v.status)},
          {"cause", clock::to_string(v.cause)}};
}

inline nlohmann::ordered_json report_json(const SimReport& r) {
  nlohmann::ordered_json j;
  j["mismatches"] = r.mismatches;
  j["violations"] = r.violations;
  j["events_processed"] = r.events_processed;
  j["channel_events"] = r.channel_events;
  j["plaintext_updates"] = r.plaintext_updates;
  j["pulses"] = r.pulses;
  j["hop_violations"] = r.hop_violations;
  j["violations_by_cause"] = {{"clock_missing", r.clock_missing},
                              {"data_missing", r.data_missing},
                              {"superseded", r.superseded}};
  auto tampers = nlohmann::ordered_json::array();
  for (const auto& t : r.tampers) {
    tampers.push_back({{"kind", to_string(t.scenario.kind)},
                       {"hop", t.scenario.hop},
                       {"start", t.scenario.start},
                       {"duration", t.scenario.duration},
                       {"violations", t.violations}});
  }
  j["tampers"] = tampers;
  j["unattributed_violations"] = r.unattributed;
  auto phases = nlohmann::ordered_json::array();
  for (const auto& p : r.phase_log) phases.push_back({{"phase", p.phase}, {"tick", p.t}});
  j["phase_log"] = phases;
  auto verdicts = nlohmann::ordered_json::array();
  for (const auto& hv : r.tampered) {
    auto v = verdict_json(hv.verdict);
    v["hop"] = hv.hop;
    verdicts.push_back(v);
  }
  j["tampered"] = verdicts;
  j["session_seeds"] = r.session_seeds;
  return j;
}

// Script of clock and data flips fed straight to a verifier, for checking
// violation patterns without a full simulation.
struct ScriptEvent {
  Tick t;
  clock::EventKind kind;
};

inline std::vector<ScriptEvent> parse_verifier_script(std::istream& in) {
  std::vector<ScriptEvent> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    Tick t;
    std::string kind;
    if (!(ls >> t)) continue;
    if (!(ls >> kind) || (kind != "clock" && kind != "data")) {
      throw ParameterError("script line " + std::to_string(lineno) + ": expected '<tick> clock|data'");
    }
    out.push_back({t, kind == "clock" ? clock::EventKind::Clock : clock::EventKind::Data});
  }
  return out;
}

inline nlohmann::ordered_json run_verifier_script(const std::vector<ScriptEvent>& script, Tick hold_window) {
  clock::ClockVerifier ver(hold_window);
  auto verdicts = nlohmann::ordered_json::array();
  auto emit = [&](const std::vector<clock::Verdict>& vs) {
    for (const auto& v : vs) verdicts.push_back(verdict_json(v));
  };
  for (std::size_t i = 0; i < script.size(); ++i) {
    const auto& e = script[i];
    emit(e.kind == clock::EventKind::Clock ? ver.on_clock_flip(e.t) : ver.on_data_flip(e.t));
    if (i + 1 == script.size() || script[i + 1].t != e.t) emit(ver.expire(e.t));
  }
  emit(ver.flush());
  nlohmann::ordered_json j;
  j["hold_window"] = hold_window;
  j["violations"] = ver.violations();
  j["verdicts"] = verdicts;
  return j;
}

}  // namespace eop::sim
