#pragma once

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "eop/error.hpp"
#include "eop/sim/trace.hpp"

namespace eop::sim {

inline std::string vcd_code(std::size_t i) {
  std::string code;
  do {
    code += static_cast<char>(33 + i % 94);
    i /= 94;
  } while (i);
  return code;
}

inline void write_vcd(std::ostream& out, const Trace& trace, const std::string& timescale = "1ns") {
  out << "$version eop $end\n";
  out << "$timescale " << timescale << " $end\n";
  out << "$scope module eop $end\n";
  for (std::size_t i = 0; i < trace.lines.size(); ++i) {
    out << "$var wire 1 " << vcd_code(i) << ' ' << trace.lines[i].name << " $end\n";
  }
  out << "$upscope $end\n$enddefinitions $end\n";
  out << "#0\n$dumpvars\n";
  for (std::size_t i = 0; i < trace.lines.size(); ++i) out << '0' << vcd_code(i) << '\n';
  out << "$end\n";
  bool first = true;
  Tick cur = 0;
  for (const auto& e : trace.events) {
    if (first || e.t != cur) {
      out << '#' << e.t << '\n';
      cur = e.t;
      first = false;
    }
    out << (e.value ? '1' : '0') << vcd_code(e.line) << '\n';
  }
}

inline Trace read_vcd(std::istream& in) {
  Trace trace;
  std::map<std::string, LineId> codes;
  std::string tok;
  bool header = true, dumpvars = false;
  Tick t = 0;
  while (in >> tok) {
    if (header) {
      if (tok == "$var") {
        std::string type, width, code, name, end;
        if (!(in >> type >> width >> code >> name >> end) || end != "$end") throw ParameterError("malformed $var");
        codes[code] = trace.add_line({name, false, false, -1});
      } else if (tok == "$enddefinitions") {
        in >> tok;
        header = false;
      }
      continue;
    }
    if (tok == "$dumpvars") {
      dumpvars = true;
    } else if (tok == "$end") {
      dumpvars = false;
    } else if (tok[0] == '#') {
      t = std::stoull(tok.substr(1));
    } else if (tok[0] == '0' || tok[0] == '1') {
      auto it = codes.find(tok.substr(1));
      if (it == codes.end()) throw ParameterError("unknown VCD identifier '" + tok.substr(1) + "'");
      if (!dumpvars) trace.events.push_back({t, it->second, tok[0] == '1'});
    } else {
      throw ParameterError("unsupported VCD token '" + tok + "'");
    }
  }
  return trace;
}

inline void write_csv(std::ostream& out, const Trace& trace, bool channel_only = false) {
  out << "tick,line,value\n";
  for (const auto& e : trace.events) {
    if (channel_only && !trace.lines[e.line].channel_visible) continue;
    out << e.t << ',' << trace.lines[e.line].name << ',' << (e.value ? 1 : 0) << '\n';
  }
}

template <class Writer>
void write_file(const std::string& path, Writer&& w) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open for writing");
  w(out);
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

}  // namespace eop::sim
