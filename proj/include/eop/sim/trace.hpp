#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "eop/error.hpp"
#include "eop/tick.hpp"

namespace eop::sim {

using LineId = std::uint32_t;

struct LineInfo {
  std::string name;
  bool channel_visible = false;  // a board-level trace between chips
  bool tamperable = false;       // encrypted bus or control clock
  int hop = -1;
};

struct FlipEvent {
  Tick t = 0;
  LineId line = 0;
  bool value = false;
  friend bool operator==(const FlipEvent&, const FlipEvent&) = default;
};

// Value changes of a set of named lines, in time order. Every line starts at 0.
struct Trace {
  std::vector<LineInfo> lines;
  std::vector<FlipEvent> events;

  LineId add_line(LineInfo info) {
    lines.push_back(std::move(info));
    return static_cast<LineId>(lines.size() - 1);
  }

  LineId find(const std::string& name) const {
    for (LineId i = 0; i < lines.size(); ++i) {
      if (lines[i].name == name) return i;
    }
    throw ConfigError("no line named '" + name + "'");
  }

  bool has(const std::string& name) const {
    for (const auto& l : lines) {
      if (l.name == name) return true;
    }
    return false;
  }

  // Flip times and values of one line.
  std::vector<FlipEvent> waveform(LineId id) const {
    std::vector<FlipEvent> out;
    for (const auto& e : events) {
      if (e.line == id) out.push_back(e);
    }
    return out;
  }

  std::size_t channel_event_count() const {
    std::size_t n = 0;
    for (const auto& e : events) n += lines[e.line].channel_visible;
    return n;
  }

  friend bool operator==(const Trace& a, const Trace& b) {
    if (a.lines.size() != b.lines.size() || a.events != b.events) return false;
    for (std::size_t i = 0; i < a.lines.size(); ++i) {
      if (a.lines[i].name != b.lines[i].name) return false;
    }
    return true;
  }
};

}  // namespace eop::sim
