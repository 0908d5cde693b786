#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "eop/bits.hpp"
#include "eop/cipher/lfsr.hpp"
#include "eop/cipher/trivium.hpp"
#include "eop/error.hpp"
#include "eop/tick.hpp"

namespace eop::link {

inline constexpr unsigned kDefaultLanes = 8;

inline std::uint64_t lane_mask(unsigned lanes) {
  return lanes >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << lanes) - 1;
}

struct PlainWord {
  std::uint64_t bits = 0;
  unsigned lanes = kDefaultLanes;
  Tick t = 0;
};

struct CipherWord {
  std::uint64_t bits = 0;
  unsigned lanes = kDefaultLanes;
  Tick t = 0;
};

// One side of an encrypted link. The keypad changes only through
// advance_keypad(), which the owner calls once per control-clock pulse.
class LinkEndpoint {
 public:
  LinkEndpoint() = default;

  static LinkEndpoint trivium(const Key80& key, const Iv80& iv, unsigned lanes = kDefaultLanes) {
    check_lanes(lanes);
    LinkEndpoint e;
    e.cipher_ = cipher::trivium_init(key, iv);
    e.lanes_ = lanes;
    return e;
  }

  // Weak variant: lane i is driven by its own LFSR.
  static LinkEndpoint lfsr_bank(std::vector<cipher::LfsrState> lfsrs) {
    check_lanes(static_cast<unsigned>(lfsrs.size()));
    LinkEndpoint e;
    e.lanes_ = static_cast<unsigned>(lfsrs.size());
    e.cipher_ = std::move(lfsrs);
    return e;
  }

  // LFSR bank whose registers are filled from the Trivium stream of (key, iv),
  // so both ends of a link derive the same bank from one session seed.
  static LinkEndpoint lfsr_bank(const Key80& key, const Iv80& iv, unsigned lanes, unsigned degree) {
    check_lanes(lanes);
    const auto taps = cipher::maximal_taps(degree);
    cipher::TriviumState src = cipher::trivium_init(key, iv);
    std::vector<cipher::LfsrState> bank;
    for (unsigned i = 0; i < lanes; ++i) {
      std::uint64_t reg = src.next(64).bits & ((degree == 64) ? ~0ULL : ((1ULL << degree) - 1));
      if (reg == 0) reg = 1;
      bank.emplace_back(taps, reg);
    }
    return lfsr_bank(std::move(bank));
  }

  void advance_keypad() {
    if (auto* t = std::get_if<cipher::TriviumState>(&cipher_)) {
      keypad_ = t->next(lanes_);
      return;
    }
    auto& bank = std::get<std::vector<cipher::LfsrState>>(cipher_);
    if (bank.empty()) throw StateError("endpoint not initialized");
    std::uint64_t bits = 0;
    for (unsigned i = 0; i < lanes_; ++i) {
      if (bank[i].step()) bits |= std::uint64_t{1} << i;
    }
    keypad_ = {bits, lanes_, keypad_.index + lanes_};
  }

  const cipher::KeypadVector& current_keypad() const { return keypad_; }
  unsigned lanes() const { return lanes_; }
  std::uint64_t index() const { return keypad_.index; }
  bool is_linear() const { return std::holds_alternative<std::vector<cipher::LfsrState>>(cipher_); }

 private:
  static void check_lanes(unsigned lanes) {
    if (lanes < 1 || lanes > 64) throw ParameterError("lane count must be in 1..64");
  }

  std::variant<cipher::TriviumState, std::vector<cipher::LfsrState>> cipher_;
  cipher::KeypadVector keypad_;
  unsigned lanes_ = 0;
};

inline CipherWord encrypt_word(const LinkEndpoint& ep, const PlainWord& p) {
  if (p.lanes != ep.lanes()) throw ParameterError("plaintext lane count does not match link");
  return {(p.bits ^ ep.current_keypad().bits) & lane_mask(p.lanes), p.lanes, p.t};
}

inline PlainWord decrypt_word(const LinkEndpoint& ep, const CipherWord& e) {
  if (e.lanes != ep.lanes()) throw ParameterError("ciphertext lane count does not match link");
  return {(e.bits ^ ep.current_keypad().bits) & lane_mask(e.lanes), e.lanes, e.t};
}

inline LinkEndpoint advance_keypad(LinkEndpoint ep) {
  ep.advance_keypad();
  return ep;
}

}  // namespace eop::link
