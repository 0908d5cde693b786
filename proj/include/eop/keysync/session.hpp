#pragma once

#include <optional>
#include <string>

#include "eop/keysync/digest.hpp"
#include "eop/keysync/entropy.hpp"
#include "eop/keysync/rsa.hpp"
#include "eop/keysync/seed.hpp"

namespace eop::keysync {

enum class Scheme { Rsa, SelfUpdate };

inline const char* to_string(Scheme s) { return s == Scheme::Rsa ? "rsa" : "self_update"; }

struct SessionKeys {
  Key80 key;
  Iv80 iv;
  friend bool operator==(const SessionKeys&, const SessionKeys&) = default;
};

inline SessionKeys keys_of(const Seed& s) {
  auto [k, v] = split_seed(s);
  return {k, v};
}

struct Session {
  Scheme scheme = Scheme::SelfUpdate;
  Seed seed;  // as held by the sender
  SessionKeys sender;
  SessionKeys receiver;
  std::optional<WrappedSeed> wrapped;
  std::optional<SeedDigest> digest;
};

// Scheme (a): the sender draws a fresh seed, wraps it under the receiver's
// public key; the receiver unwraps with its private key.
inline Session establish_rsa(const AsymKeyPair& receiver_keys, EntropySource& trng, std::uint64_t generation = 0) {
  Session s;
  s.scheme = Scheme::Rsa;
  s.seed = {trng.draw_seed(), generation};
  const WrappedSeed w = seed_wrap(s.seed, receiver_keys.public_part());
  const Seed received = seed_unwrap(w, receiver_keys.private_part());
  s.sender = keys_of(s.seed);
  s.receiver = keys_of(received);
  s.wrapped = w;
  return s;
}

// Scheme (b) endpoint: holds the embedded first seed and updates it on each
// power-up.
class SelfUpdatingSeed {
 public:
  explicit SelfUpdatingSeed(Seed first) : seed_(first) {}

  const Seed& power_up() {
    seed_ = seed_update(seed_);
    return seed_;
  }

  const Seed& current() const { return seed_; }

 private:
  Seed seed_;
};

// Scheme (b) power-up for both ends. The sender transmits the digest of its
// new seed; a mismatch at the receiver halts the session.
inline Session establish_self_update(SelfUpdatingSeed& sender, SelfUpdatingSeed& receiver,
                                     const Digester& digester = default_digester()) {
  Session s;
  s.scheme = Scheme::SelfUpdate;
  s.seed = sender.power_up();
  const Seed& mine = receiver.power_up();
  s.digest = seed_digest(s.seed, digester);
  if (!seed_digest_check(mine, *s.digest, digester)) {
    throw ProtocolError("seed digest mismatch at generation " + std::to_string(mine.generation) + ", session halted");
  }
  s.sender = keys_of(s.seed);
  s.receiver = keys_of(mine);
  return s;
}

}  // namespace eop::keysync
