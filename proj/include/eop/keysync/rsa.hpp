#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "eop/error.hpp"
#include "eop/keysync/entropy.hpp"
#include "eop/keysync/seed.hpp"

namespace eop::keysync {

struct RsaPublicKey {
  mpz_class n, e;
};

struct RsaPrivateKey {
  mpz_class n, d;
};

struct AsymKeyPair {
  mpz_class n, e, d;
  RsaPublicKey public_part() const { return {n, e}; }
  RsaPrivateKey private_part() const { return {n, d}; }
};

// Textbook RSA primitive, m^x mod n.
inline mpz_class rsa_apply(const mpz_class& m, const mpz_class& x, const mpz_class& n) {
  mpz_class out;
  mpz_powm(out.get_mpz_t(), m.get_mpz_t(), x.get_mpz_t(), n.get_mpz_t());
  return out;
}

inline std::size_t bit_length(const mpz_class& v) {
  return v == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2);
}

static_assert(sizeof(unsigned long) == 8, "GMP word conversion assumes 64-bit unsigned long");

namespace detail {

inline mpz_class random_bits(EntropySource& rng, unsigned bits) {
  mpz_class v = 0;
  for (unsigned got = 0; got < bits; got += 64) {
    v <<= 64;
    v += static_cast<unsigned long>(rng.draw_u64());
  }
  v >>= ((bits + 63) / 64) * 64 - bits;
  return v;
}

inline mpz_class random_prime(EntropySource& rng, unsigned bits) {
  for (;;) {
    mpz_class v = random_bits(rng, bits);
    mpz_setbit(v.get_mpz_t(), bits - 1);
    mpz_setbit(v.get_mpz_t(), bits - 2);
    mpz_class p;
    mpz_nextprime(p.get_mpz_t(), v.get_mpz_t());
    if (bit_length(p) == bits) return p;
  }
}

}  // namespace detail

inline AsymKeyPair generate_keypair(unsigned bits, EntropySource& rng, unsigned long e = 65537) {
  if (bits < 16) throw ParameterError("RSA modulus must have at least 16 bits");
  const unsigned pbits = (bits + 1) / 2;
  const unsigned qbits = bits - pbits;
  for (;;) {
    const mpz_class p = detail::random_prime(rng, pbits);
    const mpz_class q = detail::random_prime(rng, qbits);
    if (p == q) continue;
    const mpz_class n = p * q;
    if (bit_length(n) != bits) continue;
    const mpz_class phi = (p - 1) * (q - 1);
    mpz_class d;
    const mpz_class ee(e);
    if (mpz_invert(d.get_mpz_t(), ee.get_mpz_t(), phi.get_mpz_t()) == 0) continue;
    return {n, ee, d};
  }
}

struct WrappedSeed {
  std::vector<mpz_class> chunks;  // least significant chunk first
  unsigned chunk_bits = 0;
  std::uint64_t generation = 0;
};

// Seed chunk size for modulus n: each chunk value stays strictly below n.
inline unsigned chunk_bits_for(const mpz_class& n) {
  const std::size_t len = bit_length(n);
  if (len < 2) throw ConfigError("RSA modulus too small to carry any seed chunk");
  return static_cast<unsigned>(std::min<std::size_t>(160, len - 1));
}

inline WrappedSeed seed_wrap(const Seed& seed, const RsaPublicKey& pub) {
  WrappedSeed w;
  w.chunk_bits = chunk_bits_for(pub.n);
  w.generation = seed.generation;
  for (unsigned lo = 0; lo < 160; lo += w.chunk_bits) {
    mpz_class m = 0;
    for (unsigned i = std::min(160u, lo + w.chunk_bits); i-- > lo;) {
      m <<= 1;
      if (seed.bits.test(i)) m += 1;
    }
    w.chunks.push_back(rsa_apply(m, pub.e, pub.n));
  }
  return w;
}

inline Seed seed_unwrap(const WrappedSeed& w, const RsaPrivateKey& priv) {
  if (w.chunk_bits == 0 || w.chunk_bits > 160) throw IntegrityError("bad chunk size");
  if (w.chunks.size() != (160 + w.chunk_bits - 1) / w.chunk_bits) throw IntegrityError("wrong number of seed chunks");
  Seed s;
  s.generation = w.generation;
  unsigned lo = 0;
  for (const auto& c : w.chunks) {
    if (c < 0 || c >= priv.n) throw IntegrityError("ciphertext chunk not below modulus");
    const mpz_class m = rsa_apply(c, priv.d, priv.n);
    const unsigned width = std::min(160u, lo + w.chunk_bits) - lo;
    if (bit_length(m) > width) throw IntegrityError("decrypted chunk exceeds its slot");
    for (unsigned i = 0; i < width; ++i) s.bits.set(lo + i, mpz_tstbit(m.get_mpz_t(), i));
    lo += w.chunk_bits;
  }
  return s;
}

}  // namespace eop::keysync
