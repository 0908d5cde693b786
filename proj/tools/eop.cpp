// Command-line entry point: scenario runs, attack campaigns, cipher vectors
// and report pretty-printing.
//
// Exit codes: 0 success or expectations met, 1 usage/config/I/O error,
// 2 expectation failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "eop/attacks/report.hpp"
#include "eop/cipher/test_vectors.hpp"
#include "eop/keysync/seed.hpp"
#include "eop/sim/batch.hpp"
#include "eop/sim/report.hpp"
#include "eop/sim/scenario_file.hpp"
#include "eop/sim/trace_io.hpp"

namespace fs = std::filesystem;
using namespace eop;

namespace {

constexpr int kOk = 0;
constexpr int kConfig = 1;
constexpr int kExpect = 2;

struct Manifest {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> repeat;
  std::string format = "json";
  unsigned threads = 0;
};

void prepare_out(const std::string& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError(dir, "cannot create output directory");
}

void emit_json(const nlohmann::ordered_json& j, const std::string& dir, const std::string& name) {
  if (dir.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  const std::string path = (fs::path(dir) / name).string();
  sim::write_file(path, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
  std::cerr << "wrote " << path << '\n';
}

void emit_trace(const sim::SimReport& r, const Manifest& m, const std::string& stem) {
  if (m.format == "json" || m.out.empty()) return;
  if (r.trace.lines.empty()) return;
  const std::string path = (fs::path(m.out) / (stem + "." + m.format)).string();
  if (m.format == "vcd") {
    sim::write_file(path, [&](std::ostream& o) { sim::write_vcd(o, r.trace); });
  } else {
    sim::write_file(path, [&](std::ostream& o) { sim::write_csv(o, r.trace); });
  }
  std::cerr << "wrote " << path << '\n';
}

void report_failures(const std::vector<std::string>& failures) {
  const std::size_t shown = std::min<std::size_t>(failures.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) std::cerr << "expectation failed: " << failures[i] << '\n';
  if (failures.size() > shown) std::cerr << "... and " << failures.size() - shown << " more\n";
}

nlohmann::ordered_json indexed(std::size_t i, std::uint64_t seed, const nlohmann::ordered_json& body) {
  nlohmann::ordered_json j{{"index", i}, {"seed", seed}};
  for (const auto& [k, v] : body.items()) j[k] = v;
  return j;
}

sim::ScenarioFile load(const Manifest& m) {
  sim::ScenarioFile f = sim::load_scenario(m.config);
  if (m.repeat) f.repeat = *m.repeat;
  if (f.repeat < 1) throw ConfigError("repeat must be >= 1");
  if (m.seed) {
    f.config.stimulus.seed = *m.seed;
    f.config.keysync.entropy_seed = *m.seed;
  }
  return f;
}

int cmd_run(const Manifest& m) {
  const sim::ScenarioFile f = load(m);
  prepare_out(m.out);
  const std::uint64_t seed = f.config.stimulus.seed;
  const auto batch = sim::run_batch(f.config, f.repeat, seed, m.threads);

  nlohmann::ordered_json j;
  j["config"] = m.config;
  j["repeat"] = f.repeat;
  j["seed"] = seed;
  j["summary"] = {{"mean_violations", batch.mean_violations},
                  {"min_violations", batch.min_violations},
                  {"max_violations", batch.max_violations},
                  {"total_mismatches", batch.total_mismatches}};
  auto runs = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < batch.runs.size(); ++i) {
    runs.push_back(indexed(i, seed + i, sim::report_json(batch.runs[i])));
  }
  j["runs"] = runs;

  std::vector<std::string> failures;
  if (f.expect) {
    const auto& x = *f.expect;
    for (std::size_t i = 0; i < batch.runs.size(); ++i) {
      const auto& r = batch.runs[i];
      const std::string tag = "run " + std::to_string(i) + ": ";
      if (x.violations && r.violations != *x.violations) {
        failures.push_back(tag + "violations " + std::to_string(r.violations) + " != " + std::to_string(*x.violations));
      }
      if (x.mismatches && r.mismatches != *x.mismatches) {
        failures.push_back(tag + "mismatches " + std::to_string(r.mismatches) + " != " + std::to_string(*x.mismatches));
      }
      if (x.run_violations && (r.violations < x.run_violations->first || r.violations > x.run_violations->second)) {
        failures.push_back(tag + "violations " + std::to_string(r.violations) + " outside [" +
                           std::to_string(x.run_violations->first) + ", " + std::to_string(x.run_violations->second) + "]");
      }
    }
    if (x.mean_violations &&
        (batch.mean_violations < x.mean_violations->first || batch.mean_violations > x.mean_violations->second)) {
      failures.push_back("mean violations " + std::to_string(batch.mean_violations) + " outside [" +
                         std::to_string(x.mean_violations->first) + ", " + std::to_string(x.mean_violations->second) + "]");
    }
    j["expect"] = {{"met", failures.empty()}, {"failures", failures}};
  }

  emit_json(j, m.out, "report.json");
  for (std::size_t i = 0; i < batch.runs.size(); ++i) {
    emit_trace(batch.runs[i], m, batch.runs.size() == 1 ? "trace" : "trace_" + std::to_string(i));
  }
  std::cerr << "mean violations " << batch.mean_violations << " over " << f.repeat << " run(s), mismatches "
            << batch.total_mismatches << '\n';
  report_failures(failures);
  return failures.empty() ? kOk : kExpect;
}

int cmd_attack(const Manifest& m) {
  const sim::ScenarioFile f = load(m);
  const auto scenario = f.config.topology.scenario;
  if (scenario != sim::Scenario::ObfusPartial && scenario != sim::Scenario::ObfusFull) {
    throw ConfigError("attack needs topology.scenario = \"obfus_partial\" or \"obfus_full\"");
  }
  prepare_out(m.out);
  const attacks::AttackConfig a = f.attack.value_or(attacks::AttackConfig{});
  const std::uint64_t seed = f.config.stimulus.seed;

  auto runs = nlohmann::ordered_json::array();
  std::vector<std::string> failures;
  for (unsigned i = 0; i < f.repeat; ++i) {
    sim::ScenarioConfig c = f.config;
    c.stimulus.seed = seed + i;
    sim::Simulation s(c);
    const auto o = attacks::matching_attack(s, a);
    auto r = attacks::attack_json(o, a);
    if (o.mapping) r["mapping_correct"] = o.mapping->map == s.loaded_permutation().map;
    runs.push_back(indexed(i, seed + i, r));
    std::cerr << "run " << i << ": " << attacks::to_string(o.result);
    if (!o.reason.empty()) std::cerr << " (" << o.reason << ")";
    std::cerr << '\n';
    if (f.expect && f.expect->outcome && *f.expect->outcome != attacks::to_string(o.result)) {
      failures.push_back("run " + std::to_string(i) + ": outcome " + attacks::to_string(o.result) + " != " +
                         *f.expect->outcome);
    }
  }
  nlohmann::ordered_json j;
  j["config"] = m.config;
  j["repeat"] = f.repeat;
  j["runs"] = runs;
  if (f.expect && f.expect->outcome) j["expect"] = {{"met", failures.empty()}, {"failures", failures}};
  emit_json(j, m.out, "attack.json");
  report_failures(failures);
  return failures.empty() ? kOk : kExpect;
}

int cmd_vectors(const std::string& path) {
  const auto vectors = cipher::read_test_vectors(path);
  if (vectors.empty()) {
    std::cerr << "warning: 0 vectors in " << path << '\n';
    return kOk;
  }
  int rc = kOk;
  for (const auto& v : vectors) {
    if (auto bit = cipher::first_divergent_bit(v)) {
      std::cout << "FAIL " << v.name << ": first divergent bit " << *bit << " of " << v.stream.size() * 8 << '\n';
      rc = kExpect;
    } else {
      std::cout << "ok   " << v.name << " (" << v.stream.size() * 8 << " bits)\n";
    }
  }
  std::cout << vectors.size() << " vectors, " << (rc == kOk ? "all match" : "mismatch found") << '\n';
  return rc;
}

// Self-update seed chain, generations 0..count-1.
int cmd_seeds(const std::string& first_hex, std::uint64_t count, const std::string& out) {
  std::vector<keysync::Seed> chain;
  keysync::Seed s{keysync::SeedBits::from_hex(first_hex), 0};
  for (std::uint64_t g = 0; g < count; ++g) {
    chain.push_back(s);
    s = keysync::seed_update(s);
  }
  if (out.empty()) {
    keysync::write_seed_chain(std::cout, chain);
  } else {
    keysync::write_seed_chain(out, chain);
  }
  return kOk;
}

int cmd_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open report");
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  std::cout << j.dump(2) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Encrypted-link tamper detection simulator"};
  app.require_subcommand(1);
  Manifest m;

  auto add_manifest = [&](CLI::App* sub) {
    sub->add_option("--config", m.config, "scenario TOML file")->required();
    sub->add_option("--out", m.out, "output directory (default: report to stdout)");
    sub->add_option("--seed", m.seed, "base seed; run i uses seed + i");
    sub->add_option("--repeat", m.repeat, "number of seeded runs")->check(CLI::PositiveNumber);
    sub->add_option("--threads", m.threads, "worker threads for repeated runs (0 = all cores)");
  };
  auto* run = app.add_subcommand("run", "run a scenario and check its expect block");
  add_manifest(run);
  run->add_option("--format", m.format, "trace format written next to the report")
      ->check(CLI::IsMember({"json", "csv", "vcd"}));
  auto* attack = app.add_subcommand("attack", "run a matching attack and check its expected outcome");
  add_manifest(attack);
  std::string path;
  auto* vectors = app.add_subcommand("vectors", "check the cipher against a test-vector file");
  vectors->add_option("file", path, "vector file")->required();
  auto* report = app.add_subcommand("report", "pretty-print a JSON report");
  report->add_option("file", path, "report file")->required();
  std::string first_seed, seeds_out;
  std::uint64_t generations = 10;
  auto* seeds = app.add_subcommand("seeds", "export a self-update seed chain as 'generation hex' lines");
  seeds->add_option("--first", first_seed, "first seed, 40 hex digits")->required();
  seeds->add_option("--generations", generations, "number of seeds to export")->check(CLI::PositiveNumber);
  seeds->add_option("--out", seeds_out, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  try {
    if (*run) return cmd_run(m);
    if (*attack) return cmd_attack(m);
    if (*vectors) return cmd_vectors(path);
    if (*report) return cmd_report(path);
    if (*seeds) return cmd_seeds(first_seed, generations, seeds_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
  return kConfig;
}
