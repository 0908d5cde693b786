#include <gtest/gtest.h>

#include <random>

#include "eop/crypto_link.hpp"

using namespace eop;
using namespace eop::link;

namespace {

std::pair<LinkEndpoint, LinkEndpoint> pair_from(std::uint64_t seed, unsigned lanes = 8) {
  std::mt19937_64 rng(seed);
  Key80 k;
  Iv80 v;
  for (unsigned i = 0; i < 80; ++i) {
    k.set(i, rng() & 1U);
    v.set(i, rng() & 1U);
  }
  return {LinkEndpoint::trivium(k, v, lanes), LinkEndpoint::trivium(k, v, lanes)};
}

}  // namespace

TEST(CryptoLink, ZeroPlaintextYieldsKeypad) {
  auto [tx, rx] = pair_from(1);
  tx.advance_keypad();
  const CipherWord e = encrypt_word(tx, {0, 8, 0});
  EXPECT_EQ(e.bits, tx.current_keypad().bits);
  const CipherWord self = encrypt_word(tx, {tx.current_keypad().bits, 8, 0});
  EXPECT_EQ(self.bits, 0u);
}

TEST(CryptoLink, DecryptOfKeypadIsZero) {
  auto [tx, rx] = pair_from(2);
  rx.advance_keypad();
  EXPECT_EQ(decrypt_word(rx, {rx.current_keypad().bits, 8, 0}).bits, 0u);
}

TEST(CryptoLink, XorInvolutionExhaustiveSmallWidths) {
  for (unsigned n = 1; n <= 8; ++n) {
    auto [tx, rx] = pair_from(n, n);
    for (int step = 0; step < 4; ++step) {
      tx.advance_keypad();
      rx.advance_keypad();
      for (std::uint64_t p = 0; p < (1ULL << n); ++p) {
        const auto e = encrypt_word(tx, {p, n, 0});
        EXPECT_EQ(decrypt_word(rx, e).bits, p);
      }
    }
  }
}

TEST(CryptoLink, MillionWordRoundTrip) {
  auto [tx, rx] = pair_from(3, 8);
  std::mt19937_64 rng(3);
  std::uint64_t mismatches = 0;
  for (int i = 0; i < 1'000'000; ++i) {
    tx.advance_keypad();
    rx.advance_keypad();
    const std::uint64_t p = rng() & 0xFF;
    mismatches += decrypt_word(rx, encrypt_word(tx, {p, 8, Tick(i)})).bits != p;
    ASSERT_EQ(tx.index(), rx.index());
  }
  EXPECT_EQ(mismatches, 0u);
}

TEST(CryptoLink, RandomWideWordsRoundTrip) {
  for (unsigned n : {16u, 32u, 63u, 64u}) {
    auto [tx, rx] = pair_from(n, n);
    std::mt19937_64 rng(n);
    for (int i = 0; i < 1000; ++i) {
      tx.advance_keypad();
      rx.advance_keypad();
      const std::uint64_t p = rng() & lane_mask(n);
      EXPECT_EQ(decrypt_word(rx, encrypt_word(tx, {p, n, 0})).bits, p);
    }
  }
}

TEST(CryptoLink, SkippedAdvanceDesynchronizes) {
  auto [tx, rx] = pair_from(4, 8);
  tx.advance_keypad();
  std::mt19937_64 rng(4);
  int mismatches = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    tx.advance_keypad();
    rx.advance_keypad();
    const std::uint64_t p = rng() & 0xFF;
    mismatches += decrypt_word(rx, encrypt_word(tx, {p, 8, 0})).bits != p;
  }
  const double rate = double(mismatches) / n;
  EXPECT_NEAR(rate, 1.0 - 1.0 / 256, 0.01);
}

TEST(CryptoLink, EqualAdvancesGiveEqualKeypads) {
  auto [a, b] = pair_from(5, 32);
  for (int i = 0; i < 1000; ++i) {
    a.advance_keypad();
    b.advance_keypad();
    ASSERT_EQ(a.current_keypad(), b.current_keypad());
  }
  EXPECT_EQ(a.index(), 1000u * 32);
}

TEST(CryptoLink, OffByOneAdvanceDiffers) {
  auto [a, b] = pair_from(6, 64);
  a.advance_keypad();
  for (int i = 0; i < 1000; ++i) {
    a.advance_keypad();
    b.advance_keypad();
    EXPECT_NE(a.current_keypad().bits, b.current_keypad().bits);
  }
}

TEST(CryptoLink, ConstantPlaintextCiphertextIsBalanced) {
  auto [tx, rx] = pair_from(7, 8);
  std::uint64_t ones = 0, bits = 0;
  for (int i = 0; i < 20000; ++i) {
    tx.advance_keypad();
    ones += std::popcount(encrypt_word(tx, {0xFF, 8, 0}).bits);
    bits += 8;
  }
  EXPECT_NEAR(double(ones) / bits, 0.5, 0.02);
}

TEST(CryptoLink, LaneMismatchRejected) {
  auto [tx, rx] = pair_from(8, 8);
  EXPECT_THROW(encrypt_word(tx, {0, 7, 0}), ParameterError);
  EXPECT_THROW(decrypt_word(rx, {0, 9, 0}), ParameterError);
  EXPECT_THROW(LinkEndpoint::trivium(Key80{}, Iv80{}, 0), ParameterError);
  EXPECT_THROW(LinkEndpoint::trivium(Key80{}, Iv80{}, 65), ParameterError);
}

TEST(CryptoLink, LfsrBankLanesFollowTheirRegisters) {
  std::vector<cipher::LfsrState> bank;
  for (unsigned i = 0; i < 8; ++i) bank.emplace_back(cipher::maximal_taps(8), i + 1);
  auto copy = bank;
  LinkEndpoint ep = LinkEndpoint::lfsr_bank(bank);
  EXPECT_TRUE(ep.is_linear());
  for (int step = 0; step < 100; ++step) {
    ep.advance_keypad();
    for (unsigned i = 0; i < 8; ++i) EXPECT_EQ(ep.current_keypad().lane(i), copy[i].step());
  }
  EXPECT_EQ(ep.index(), 800u);
}

TEST(CryptoLink, LfsrBankFromKeyIsShared) {
  Key80 k = Key80::from_hex("0123456789abcdef0123");
  auto a = LinkEndpoint::lfsr_bank(k, Iv80{}, 8, 16);
  auto b = LinkEndpoint::lfsr_bank(k, Iv80{}, 8, 16);
  for (int i = 0; i < 100; ++i) {
    a = advance_keypad(a);
    b.advance_keypad();
    ASSERT_EQ(a.current_keypad(), b.current_keypad());
  }
}
