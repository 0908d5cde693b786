#pragma once

#include <cstdint>
#include <random>

#include "eop/keysync/seed.hpp"

namespace eop::keysync {

class EntropySource {
 public:
  virtual ~EntropySource() = default;
  virtual SeedBits draw_seed() = 0;
  virtual std::uint64_t draw_u64() = 0;
};

// Reproducible stand-in for a hardware TRNG.
class DeterministicEntropy : public EntropySource {
 public:
  explicit DeterministicEntropy(std::uint64_t seed) : rng_(seed) {}

  SeedBits draw_seed() override {
    SeedBits b;
    for (unsigned w = 0; w < 3; ++w) {
      const std::uint64_t v = rng_();
      for (unsigned i = 0; i < 64 && 64 * w + i < 160; ++i) b.set(64 * w + i, (v >> i) & 1U);
    }
    return b;
  }

  std::uint64_t draw_u64() override { return rng_(); }

 private:
  std::mt19937_64 rng_;
};

class SystemEntropy : public EntropySource {
 public:
  SeedBits draw_seed() override {
    SeedBits b;
    for (unsigned i = 0; i < 160; i += 32) {
      const std::uint32_t v = dev_();
      for (unsigned k = 0; k < 32; ++k) b.set(i + k, (v >> k) & 1U);
    }
    return b;
  }

  std::uint64_t draw_u64() override { return (std::uint64_t{dev_()} << 32) | dev_(); }

 private:
  std::random_device dev_;
};

}  // namespace eop::keysync
