#pragma once

#include <openssl/evp.h>

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "eop/error.hpp"
#include "eop/keysync/seed.hpp"

namespace eop::keysync {

struct SeedDigest {
  std::vector<std::uint8_t> bytes;
  friend bool operator==(const SeedDigest&, const SeedDigest&) = default;
};

class Digester {
 public:
  virtual ~Digester() = default;
  virtual std::size_t length() const = 0;
  virtual std::vector<std::uint8_t> digest(std::span<const std::uint8_t> data) const = 0;
};

class Sha256Digester : public Digester {
 public:
  std::size_t length() const override { return 32; }

  std::vector<std::uint8_t> digest(std::span<const std::uint8_t> data) const override {
    std::vector<std::uint8_t> out(EVP_MAX_MD_SIZE);
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1) {
      throw ProtocolError("SHA-256 computation failed");
    }
    out.resize(len);
    return out;
  }
};

inline const Digester& default_digester() {
  static const Sha256Digester d;
  return d;
}

inline SeedDigest seed_digest(const Seed& s, const Digester& d = default_digester()) {
  const auto bytes = s.bits.to_bytes();
  return {d.digest(bytes)};
}

inline bool seed_digest_check(const Seed& local, const SeedDigest& remote, const Digester& d = default_digester()) {
  if (remote.bytes.size() != d.length()) {
    throw ProtocolError("remote digest has " + std::to_string(remote.bytes.size()) + " bytes, expected " +
                        std::to_string(d.length()));
  }
  return seed_digest(local, d) == remote;
}

}  // namespace eop::keysync
