#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "eop/obfusc.hpp"

using namespace eop;
using namespace eop::obfusc;

TEST(Permutation, ZeroKeyIsIdentity) {
  EXPECT_EQ(permutation_from_key({0, 8}), Permutation::identity(8));
}

TEST(Permutation, AllKeysForFourLanesAreDistinct) {
  std::set<std::vector<unsigned>> seen;
  for (std::uint64_t k = 0; k < 24; ++k) seen.insert(permutation_from_key({k, 4}).map);
  EXPECT_EQ(seen.size(), 24u);
}

TEST(Permutation, LastKeyIsDescending) {
  EXPECT_EQ(permutation_from_key({23, 4}).map, (std::vector<unsigned>{3, 2, 1, 0}));
  EXPECT_EQ(permutation_from_key({1, 4}).map, (std::vector<unsigned>{0, 1, 3, 2}));
  EXPECT_EQ(permutation_from_key({6, 4}).map, (std::vector<unsigned>{1, 0, 2, 3}));
}

TEST(Permutation, MatchesLexicographicOrder) {
  // Lehmer decoding enumerates permutations in lexicographic order.
  std::vector<unsigned> perm{0, 1, 2, 3, 4, 5};
  std::uint64_t k = 0;
  do {
    EXPECT_EQ(permutation_from_key({k++, 6}).map, perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  EXPECT_EQ(k, 720u);
}

TEST(Permutation, EncodeInvertsDecode) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const unsigned n = 1 + rng() % 16;
    const std::uint64_t raw = rng() % factorial(n);
    EXPECT_EQ(key_from_permutation(permutation_from_key({raw, n})).raw, raw);
  }
}

TEST(Permutation, KeyRangeChecked) {
  EXPECT_THROW(permutation_from_key({24, 4}), ParameterError);
  EXPECT_THROW(permutation_from_key({0, 17}), ParameterError);
  EXPECT_THROW(permutation_from_key({0, 0}), ParameterError);
  EXPECT_NO_THROW(permutation_from_key({factorial(16) - 1, 16}));
}

TEST(PermuteWord, Routing) {
  const Permutation id = Permutation::identity(8);
  EXPECT_EQ(permute_word(id, 0xA7, 8), 0xA7u);
  Permutation p = id;
  std::swap(p.map[0], p.map[5]);
  EXPECT_EQ(permute_word(p, 0b00000001, 8), 0b00100000u);
  EXPECT_THROW(permute_word(p, 0, 7), ParameterError);
}

TEST(PermuteWord, InverseRestores) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 500; ++i) {
    const Permutation p = permutation_from_key({rng() % factorial(8), 8});
    const std::uint64_t w = rng() & 0xFF;
    EXPECT_EQ(permute_word(p.inverse(), permute_word(p, w, 8), 8), w);
  }
}

TEST(PermuteWord, SingleHotVectorsStayDistinct) {
  for (unsigned n = 1; n <= 8; ++n) {
    for (std::uint64_t raw = 0; raw < factorial(n); raw += 1 + factorial(n) / 50) {
      const Permutation p = permutation_from_key({raw, n});
      std::set<std::uint64_t> outs;
      for (unsigned i = 0; i < n; ++i) {
        const std::uint64_t o = permute_word(p, std::uint64_t{1} << i, n);
        EXPECT_EQ(std::popcount(o), 1);
        outs.insert(o);
      }
      EXPECT_EQ(outs.size(), n);
    }
  }
}

TEST(Permutation, ExactlyOneKeyReproducesDesign) {
  const Permutation design = permutation_from_key({4321, 8});
  unsigned functional = 0;
  for (std::uint64_t k = 0; k < factorial(8); ++k) {
    const Permutation p = permutation_from_key({k, 8});
    bool all_right = true;
    for (unsigned i = 0; i < 8; ++i) all_right = all_right && permute_word(p, 1ULL << i, 8) == permute_word(design, 1ULL << i, 8);
    functional += all_right;
  }
  EXPECT_EQ(functional, 1u);
}
