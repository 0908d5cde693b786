#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "eop/attacks/berlekamp_massey.hpp"
#include "eop/cipher/lfsr.hpp"
#include "eop/error.hpp"

namespace eop::attacks {

// Keystream bits of one lane, recovered as plaintext XOR ciphertext.
struct KeystreamSample {
  std::vector<std::uint8_t> bits;
  std::size_t length() const { return bits.size(); }
};

struct AttackBudget {
  std::uint64_t max_guesses = std::uint64_t{1} << 24;
  std::uint64_t horizon = 1000;

  void check() const {
    if (max_guesses < 1) throw ParameterError("attack budget needs at least one guess");
  }
};

// What the attacker assumes about the keypad: a linear register of `degree`,
// with public taps or, when taps is empty, unknown ones.
struct LinearStructure {
  unsigned degree = 16;
  std::vector<unsigned> taps;
};

enum class RecoveryMethod { ReadOff, Exhaustive, Synthesis };

inline const char* to_string(RecoveryMethod m) {
  switch (m) {
    case RecoveryMethod::ReadOff: return "read_off";
    case RecoveryMethod::Exhaustive: return "exhaustive";
    case RecoveryMethod::Synthesis: return "synthesis";
  }
  return "?";
}

// Output recurrence o[m] = XOR over taps t of o[m-t], seeded with the first
// `degree` outputs.
struct LinearModel {
  unsigned degree = 0;
  std::vector<unsigned> taps;
  std::vector<std::uint8_t> init;

  std::vector<std::uint8_t> generate(std::size_t n) const {
    std::vector<std::uint8_t> out(n);
    for (std::size_t m = 0; m < n; ++m) {
      if (m < degree) {
        out[m] = init[m];
        continue;
      }
      std::uint8_t b = 0;
      for (unsigned t : taps) b ^= out[m - t];
      out[m] = b;
    }
    return out;
  }

  // The same model as a cipher-module register, when it has that shape.
  std::optional<cipher::LfsrState> as_lfsr() const {
    if (degree < 2 || taps.empty() || *std::max_element(taps.begin(), taps.end()) != degree) return std::nullopt;
    return cipher::LfsrState::from_output_prefix(taps, init);
  }
};

struct Recovery {
  bool recovered = false;
  RecoveryMethod method = RecoveryMethod::ReadOff;
  std::uint64_t guesses_used = 0;
  unsigned linear_complexity = 0;  // synthesis only
  LinearModel model;               // best candidate, also when not recovered
  std::string reason;
};

namespace detail {

inline bool regenerates(const LinearModel& m, const std::vector<std::uint8_t>& bits) {
  return m.generate(bits.size()) == bits;
}

inline LinearModel read_off(const LinearStructure& s, const std::vector<std::uint8_t>& bits) {
  return {s.degree, s.taps, std::vector<std::uint8_t>(bits.begin(), bits.begin() + s.degree)};
}

// Lowest register value in [lo, hi) whose output matches bits, if any.
inline std::optional<std::uint64_t> scan(unsigned d, std::uint64_t tap_mask, const std::vector<std::uint8_t>& bits,
                                         std::uint64_t lo, std::uint64_t hi, const std::atomic<std::uint64_t>& best) {
  const std::uint64_t width = d == 64 ? ~0ULL : (1ULL << d) - 1;
  for (std::uint64_t g = lo; g < hi; ++g) {
    if ((g & 0xFFFF) == 0 && best.load(std::memory_order_relaxed) < lo) return std::nullopt;
    std::uint64_t reg = g;
    bool ok = true;
    for (std::uint8_t b : bits) {
      if (((reg >> (d - 1)) & 1U) != b) {
        ok = false;
        break;
      }
      reg = ((reg << 1) | (std::popcount(reg & tap_mask) & 1U)) & width;
    }
    if (ok) return g;
  }
  return std::nullopt;
}

}  // namespace detail

// Exhaustive search over register values 0, 1, 2, ... up to the budget. Ranges
// are split across threads; the lowest match wins, so the result and the
// guess count equal those of a sequential scan.
inline Recovery exhaustive_search(const KeystreamSample& sample, const LinearStructure& s, const AttackBudget& budget,
                                  unsigned threads = 0) {
  budget.check();
  if (s.taps.empty()) throw ParameterError("exhaustive search needs the taps");
  if (s.degree > 32) throw ParameterError("exhaustive search is limited to degree 32");
  if (sample.length() < s.degree) throw InsufficientDataError("need at least degree keystream bits");
  std::uint64_t tap_mask = 0;
  for (unsigned t : s.taps) tap_mask |= 1ULL << (t - 1);
  const std::uint64_t space = 1ULL << s.degree;
  const std::uint64_t total = std::min(space, budget.max_guesses);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t chunk = std::max<std::uint64_t>(1, (total + threads - 1) / threads);
  std::atomic<std::uint64_t> best{~0ULL};
  std::vector<std::thread> pool;
  for (std::uint64_t lo = 0; lo < total; lo += chunk) {
    const std::uint64_t hi = std::min(total, lo + chunk);
    pool.emplace_back([&, lo, hi] {
      if (auto g = detail::scan(s.degree, tap_mask, sample.bits, lo, hi, best)) {
        std::uint64_t cur = best.load();
        while (*g < cur && !best.compare_exchange_weak(cur, *g)) {
        }
      }
    });
  }
  for (auto& t : pool) t.join();

  Recovery r;
  r.method = RecoveryMethod::Exhaustive;
  if (best.load() != ~0ULL) {
    r.recovered = true;
    r.guesses_used = best.load() + 1;
    std::vector<std::uint8_t> init(s.degree);
    for (unsigned k = 0; k < s.degree; ++k) init[k] = (best.load() >> (s.degree - 1 - k)) & 1U;
    r.model = {s.degree, s.taps, init};
  } else {
    r.guesses_used = total;
    r.model = detail::read_off(s, sample.bits);
    r.reason = "no register value among " + std::to_string(total) + " guesses regenerates the sample";
  }
  return r;
}

// Recovers a linear keypad from its keystream. With public taps the state is
// read off the first `degree` bits; without them Berlekamp-Massey synthesizes
// the shortest register. Either way the model must regenerate the sample.
inline Recovery recover_linear_state(const KeystreamSample& sample, const LinearStructure& s, const AttackBudget& budget) {
  budget.check();
  Recovery r;
  if (!s.taps.empty()) {
    if (sample.length() < s.degree) throw InsufficientDataError("need at least degree keystream bits");
    r.method = RecoveryMethod::ReadOff;
    r.guesses_used = 1;
    r.model = detail::read_off(s, sample.bits);
    r.recovered = detail::regenerates(r.model, sample.bits);
    if (!r.recovered) r.reason = "state read off the sample does not regenerate it";
    return r;
  }
  if (sample.length() < 2ULL * s.degree) throw InsufficientDataError("need at least twice the hypothesized degree");
  r.method = RecoveryMethod::Synthesis;
  r.guesses_used = 1;
  const Recurrence rec = berlekamp_massey(sample.bits);
  r.linear_complexity = rec.length;
  r.model.degree = rec.length;
  for (unsigned i = 1; i <= rec.length; ++i) {
    if (rec.c[i]) r.model.taps.push_back(i);
  }
  r.model.init.assign(sample.bits.begin(), sample.bits.begin() + rec.length);
  r.recovered = rec.length <= s.degree && 2ULL * rec.length <= sample.length();
  if (!r.recovered) {
    r.reason = "linear complexity " + std::to_string(rec.length) + " exceeds the hypothesized degree " +
               std::to_string(s.degree);
  }
  return r;
}

// Fraction of bits where prediction and observation agree.
inline double prediction_accuracy(const std::vector<std::uint8_t>& predicted, const std::vector<std::uint8_t>& observed) {
  if (predicted.size() != observed.size() || observed.empty()) throw ParameterError("prediction and observation sizes differ");
  std::size_t ok = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) ok += predicted[i] == observed[i];
  return double(ok) / observed.size();
}

}  // namespace eop::attacks
