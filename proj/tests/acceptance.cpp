// Acceptance checks. One line per criterion; `--criterion N` runs just one.
// Exit status is 0 iff every selected criterion passes.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "eop/attacks/matching.hpp"
#include "eop/cipher/gate_count.hpp"
#include "eop/cipher/test_vectors.hpp"
#include "eop/keysync/session.hpp"
#include "eop/sim/batch.hpp"
#include "eop/sim/report.hpp"

using namespace eop;

namespace {

struct Check {
  bool pass = true;
  std::ostringstream detail;
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (!what.empty()) failures.push_back(what);
    pass = false;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Published keystream vectors over the first 512 bits, zero divergence.
constexpr std::size_t kMinVectors = 4;
constexpr std::size_t kVectorBits = 512;
constexpr double kC1Seconds = 1.0;

Check criterion1() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  const auto vectors = cipher::read_test_vectors(std::string(EOP_TEST_DATA) + "/trivium_estream.txt");
  std::size_t matched = 0;
  for (const auto& v : vectors) {
    if (v.stream.size() * 8 < kVectorBits) {
      c.require(false, v.name + " has fewer than 512 bits");
      continue;
    }
    cipher::TestVector head = v;
    head.stream.resize(kVectorBits / 8);
    if (auto bit = cipher::first_divergent_bit(head)) {
      c.require(false, v.name + " diverges at bit " + std::to_string(*bit));
    } else {
      ++matched;
    }
  }
  const double s = seconds_since(t0);
  c.detail << matched << " of " << vectors.size() << " vectors match over 512 bits, "
           << kMinVectors << " required";
  c.require(vectors.size() >= kMinVectors, "");
  c.require(s < kC1Seconds, "runtime " + std::to_string(s) + " s");
  return c;
}

// Clean runs across the frequency grid in both stimulus modes.
constexpr std::uint64_t kC2Updates = 1000000;
constexpr double kC2Seconds = 60.0;

Check criterion2() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  std::uint64_t updates = 0, mismatches = 0, violations = 0, runs = 0;
  auto run = [&](sim::ScenarioConfig cfg) {
    cfg.run.record_traces = false;
    const auto r = sim::run_scenario(cfg);
    updates += r.plaintext_updates;
    mismatches += r.mismatches;
    violations += r.violations;
    ++runs;
  };
  for (unsigned f : sim::default_frequency_grid()) {
    sim::ScenarioConfig cfg;
    cfg.stimulus.period = sim::period_for_frequency(f, cfg.stimulus.base_period);
    cfg.stimulus.seed = f;
    cfg.run.horizon = cfg.run.exec_start + 25000 * cfg.stimulus.period;
    run(cfg);
  }
  for (std::uint64_t seed = 1; updates < kC2Updates; ++seed) {
    sim::ScenarioConfig cfg;
    cfg.stimulus.mode = sim::StimulusMode::Random;
    cfg.stimulus.seed = seed;
    cfg.run.horizon = 200000;
    run(cfg);
  }
  const double s = seconds_since(t0);
  c.detail << updates << " plaintext updates in " << runs << " runs, mismatches " << mismatches << ", violations "
           << violations << ", " << s << " s";
  c.require(updates >= kC2Updates, "");
  c.require(mismatches == 0 && violations == 0, "");
  c.require(s < kC2Seconds, "");
  return c;
}

// Grounding for k base periods, 100 seeded runs per point.
constexpr unsigned kC3Runs = 100;
constexpr double kC3MeanTolerance = 0.2;
constexpr double kC3Seconds = 120.0;

Check criterion3() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  for (auto kind : {sim::TamperKind::GroundClock, sim::TamperKind::GroundData}) {
    for (Tick k : {1, 5, 10, 100}) {
      sim::ScenarioConfig cfg;
      cfg.run.record_traces = false;
      cfg.run.horizon = 500 + 5 * k + 200;
      sim::TamperScenario tm;
      tm.kind = kind;
      tm.start = 500;
      tm.duration = k * cfg.stimulus.base_period;
      tm.jitter = cfg.stimulus.base_period;
      cfg.tampers.push_back(tm);
      const auto b = sim::run_batch(cfg, kC3Runs, 1000 * k, 1);
      c.detail << (kind == sim::TamperKind::GroundClock ? "clock" : "data") << " " << k << "x: mean " << b.mean_violations
               << " [" << b.min_violations << "," << b.max_violations << "]; ";
      c.require(std::abs(b.mean_violations - double(k)) <= kC3MeanTolerance, "mean off at k=" + std::to_string(k));
      c.require(b.min_violations >= k && b.max_violations <= k + 1, "run outside [k, k+1] at k=" + std::to_string(k));
    }
  }
  const double s = seconds_since(t0);
  c.detail << s << " s";
  c.require(s < kC3Seconds, "");
  return c;
}

// Verifier scripts against golden reports.
Check criterion4() {
  Check c;
  for (const char* name : {"fig5_s1", "fig5_s2", "interleaved_safe"}) {
    std::ifstream script(std::string(EOP_GOLDEN) + "/" + name + ".script");
    std::ifstream golden(std::string(EOP_GOLDEN) + "/" + name + ".json");
    const auto got = sim::run_verifier_script(sim::parse_verifier_script(script), 2);
    const auto want = nlohmann::ordered_json::parse(golden);
    std::string tampered;
    for (const auto& v : got["verdicts"]) {
      if (v["status"] == "Tampered") tampered += " " + v["event"].get<std::string>() + "@" + std::to_string(v["tick"].get<Tick>());
    }
    c.detail << name << ":" << (tampered.empty() ? " none" : tampered) << "; ";
    c.require(got == want, std::string(name) + " differs from golden");
  }
  return c;
}

// Three grounding attacks in one execution phase.
Check criterion5() {
  Check c;
  sim::ScenarioConfig cfg;
  cfg.run.horizon = 1000;
  cfg.tampers = {{sim::TamperKind::GroundClock, {}, 0, 202, 5, 0},
                 {sim::TamperKind::GroundClock, {}, 0, 402, 15, 0},
                 {sim::TamperKind::GroundData, {}, 0, 602, 20, 0}};
  const auto r = sim::run_scenario(cfg);
  const auto clock = r.tampers[0].violations + r.tampers[1].violations;
  const auto data = r.tampers[2].violations;
  c.detail << "clock " << r.tampers[0].violations << "+" << r.tampers[1].violations << "=" << clock << ", data " << data
           << ", unattributed " << r.unattributed << ", total " << r.violations;
  c.require(r.tampers[0].violations == 1 && r.tampers[1].violations == 3, "");
  c.require(clock == 4 && data == 4 && r.unattributed == 0 && r.violations == 8, "");
  return c;
}

// Keystream recovery against linear and Trivium keypads.
constexpr double kC6Accuracy = 0.02;
constexpr double kC6Seconds = 120.0;

sim::ScenarioConfig partial_topology(sim::KeypadKind keypad, unsigned degree, std::uint64_t key, std::uint64_t seed) {
  sim::ScenarioConfig cfg;
  cfg.topology.scenario = sim::Scenario::ObfusPartial;
  cfg.topology.keypad = keypad;
  cfg.topology.lfsr_degree = degree;
  cfg.topology.permutation_key = cfg.topology.design_key = key;
  cfg.stimulus.seed = seed;
  cfg.keysync.entropy_seed = seed;
  cfg.run.horizon = 300;
  return cfg;
}

Check criterion6() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  attacks::AttackConfig a;
  a.max_guesses = std::uint64_t{1} << 24;
  a.horizon = 1000;
  for (unsigned d : {8u, 16u, 24u}) {
    const std::uint64_t key = 1000 + d;
    sim::Simulation s(partial_topology(sim::KeypadKind::Lfsr, d, key, d));
    const auto o = attacks::matching_attack(s, a);
    const bool exact = o.mapping && o.mapping->map == obfusc::permutation_from_key({key, 8}).map;
    const double acc = o.prediction_accuracy().value_or(0.0);
    c.detail << "lfsr" << d << " " << attacks::to_string(o.result) << " acc " << acc << "; ";
    c.require(o.result == attacks::OutcomeKind::RecoveredMapping && exact, "lfsr" + std::to_string(d) + " mapping");
    c.require(acc == 1.0 && o.predicted_bits_total == 8 * a.horizon, "lfsr" + std::to_string(d) + " prediction");
  }
  sim::Simulation s(partial_topology(sim::KeypadKind::Trivium, 16, 777, 3));
  const auto o = attacks::matching_attack(s, a);
  const double acc = o.prediction_accuracy().value_or(0.0);
  c.detail << "trivium " << attacks::to_string(o.result) << " acc " << acc << " guesses " << o.guesses_used << "; ";
  c.require(o.result == attacks::OutcomeKind::Defeated, "trivium outcome");
  c.require(std::abs(acc - 0.5) <= kC6Accuracy, "trivium accuracy");
  const double sec = seconds_since(t0);
  c.detail << sec << " s";
  c.require(sec < kC6Seconds, "");
  return c;
}

// Naive and fake-clock attacks over 50 seeded runs per keypad.
constexpr unsigned kC7Runs = 50;

Check criterion7() {
  Check c;
  unsigned detected = 0, defeated = 0, total = 0;
  std::uint64_t matches = 0, min_violations = ~0ULL;
  for (auto keypad : {sim::KeypadKind::Trivium, sim::KeypadKind::Lfsr}) {
    for (unsigned i = 0; i < kC7Runs; ++i) {
      const std::uint64_t seed = 1 + i;
      attacks::AttackConfig naive;
      naive.strategy = attacks::AttackStrategy::Naive;
      naive.lane = i % 8;
      sim::Simulation s1(partial_topology(keypad, 16, 5000 + i, seed));
      const auto n = attacks::matching_attack(s1, naive);
      detected += n.result == attacks::OutcomeKind::Detected && n.violations >= 1;
      min_violations = std::min(min_violations, n.violations);

      attacks::AttackConfig fake;
      fake.strategy = attacks::AttackStrategy::FakeClock;
      sim::Simulation s2(partial_topology(keypad, 16, 5000 + i, seed));
      const auto f = attacks::matching_attack(s2, fake);
      matches += f.single_output_matches;
      defeated += f.result == attacks::OutcomeKind::Defeated;
      ++total;
    }
  }
  c.detail << "naive detected " << detected << "/" << total << " (min violations " << min_violations
           << "), fake clock defeated " << defeated << "/" << total << " with " << matches << " single-output matches";
  c.require(detected == total && defeated == total && matches == 0, "");
  return c;
}

// Gate-count model against the published table.
Check criterion8() {
  Check c;
  struct Row {
    unsigned width, ff, and_gates, xor_gates;
  };
  const Row table[] = {{1, 288, 3, 11}, {8, 288, 24, 88}, {16, 288, 48, 176}, {32, 288, 96, 354}, {64, 288, 192, 704}};
  for (const auto& r : table) {
    const auto g = cipher::gate_count_estimate(r.width);
    c.detail << r.width << "-bit " << g.flip_flops << "/" << g.and_gates << "/" << g.xor_gates;
    if (r.width == 32) {
      c.detail << " (table lists " << r.xor_gates << " XOR, linear model gives " << g.xor_gates << ")";
      c.require(g.flip_flops == r.ff && g.and_gates == r.and_gates && g.xor_gates == 11 * r.width, "32-bit model");
    } else {
      c.require(g.flip_flops == r.ff && g.and_gates == r.and_gates && g.xor_gates == r.xor_gates,
                std::to_string(r.width) + "-bit row");
    }
    c.detail << "; ";
  }
  return c;
}

// Both keysync schemes agree; any one-bit seed change fails the digest.
constexpr unsigned kC9PowerUps = 10000;
constexpr unsigned kC9RsaCycles = 1000;

Check criterion9() {
  Check c;
  const auto first = keysync::SeedBits::from_hex(sim::default_first_seed(0));
  keysync::SelfUpdatingSeed tx({first, 0}), rx({first, 0});
  unsigned agreed_b = 0, flips_tested = 0, flips_caught = 0;
  for (unsigned g = 0; g < kC9PowerUps; ++g) {
    const auto s = keysync::establish_self_update(tx, rx);
    agreed_b += s.sender == s.receiver;
    if (g % 100 == 0) {
      for (unsigned bit = 0; bit < 160; ++bit) {
        keysync::Seed bad = rx.current();
        bad.bits.flip(bit);
        ++flips_tested;
        flips_caught += !keysync::seed_digest_check(bad, *s.digest);
      }
    }
  }
  keysync::DeterministicEntropy trng(2024);
  const auto kp = keysync::generate_keypair(512, trng);
  unsigned agreed_a = 0;
  for (unsigned i = 0; i < kC9RsaCycles; ++i) {
    const auto s = keysync::establish_rsa(kp, trng, i);
    agreed_a += s.sender == s.receiver;
    keysync::Seed bad = s.seed;
    bad.bits.flip(i % 160);
    ++flips_tested;
    flips_caught += !keysync::seed_digest_check(bad, keysync::seed_digest(s.seed));
  }
  bool halted = false;
  {
    keysync::SelfUpdatingSeed a({first, 0}), b({first, 0});
    b.power_up();  // one end a generation ahead
    try {
      keysync::establish_self_update(a, b);
    } catch (const ProtocolError&) {
      halted = true;
    }
  }
  c.detail << "self-update " << agreed_b << "/" << kC9PowerUps << ", rsa " << agreed_a << "/" << kC9RsaCycles
           << ", one-bit flips caught " << flips_caught << "/" << flips_tested << ", desync halts " << (halted ? "yes" : "no");
  c.require(agreed_b == kC9PowerUps && agreed_a == kC9RsaCycles && flips_caught == flips_tested && halted, "");
  return c;
}

std::string trimmed(std::string s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == ';')) s.pop_back();
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  const std::function<Check()> criteria[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                             criterion6, criterion7, criterion8, criterion9};
  const char* names[] = {"cipher vectors",   "round trip",        "tamper durations", "verifier goldens",   "attack sequence",
                         "attack asymmetry", "naive and fake clock", "gate count",     "keysync agreement"};
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--criterion N]\n";
      return 2;
    }
  }
  if (only < 0 || only > 9) {
    std::cerr << "criterion must be 1..9\n";
    return 2;
  }
  bool all = true;
  for (int n = 1; n <= 9; ++n) {
    if (only && n != only) continue;
    Check c;
    try {
      c = criteria[n - 1]();
    } catch (const std::exception& e) {
      c.pass = false;
      c.detail << "error: " << e.what();
    }
    std::cout << "criterion " << n << " (" << names[n - 1] << "): " << (c.pass ? "PASS" : "FAIL") << ": "
              << trimmed(c.detail.str());
    for (const auto& f : c.failures) std::cout << " [" << f << "]";
    std::cout << std::endl;
    all = all && c.pass;
  }
  return all ? 0 : 1;
}
