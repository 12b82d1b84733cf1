#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "qi/swi.hpp"
#include "test_oracles.hpp"

namespace qi {
namespace {

using testing::brute_sw_ceil_value;
using testing::enumerate_sw_ceil_value;

TEST(SwValue, Examples) {
  EXPECT_EQ(sw_value({12, 2}), 48);
  EXPECT_EQ(sw_value({1, 0}), 1);
  EXPECT_EQ(sw_value({0, 0}), 0);
}

TEST(SwCeil, Examples) {
  EXPECT_EQ(sw_ceil(13, Precision(4)), (SWInt{13, 0}));
  EXPECT_EQ(sw_ceil(45, Precision(4)), (SWInt{12, 2}));
  EXPECT_EQ(enumerate_sw_ceil_value(45, 4), 48);
  EXPECT_EQ(sw_ceil(0, Precision(8)), SWInt::zero());
}

TEST(SwCeil, MantissaOverflowRenormalizes) {
  // 61 at g=4 needs mantissa 16 at shift 2, which becomes 8 at shift 3.
  EXPECT_EQ(sw_ceil(61, Precision(4)), (SWInt{8, 3}));
  EXPECT_EQ(sw_ceil((BigInt(1) << 40) - 1, Precision(32)), (SWInt{0x80000000u, 9}));
}

TEST(SwCeil, MatchesEnumerationForSmallPrecisions) {
  for (unsigned g = 4; g <= 7; ++g) {
    for (int x = 0; x < 3000; ++x) {
      const SWInt q = sw_ceil(x, Precision(g));
      ASSERT_TRUE(is_well_formed(q, Precision(g)));
      ASSERT_EQ(sw_value(q), enumerate_sw_ceil_value(x, g)) << "x=" << x << " g=" << g;
    }
  }
}

TEST(SwCeil, RandomPropertiesUpTo64Bits) {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 20000; ++iter) {
    const unsigned g = 4 + rng() % 29;
    const Precision p(g);
    const BigInt x = BigInt(rng() >> (rng() % 64));
    const SWInt q = sw_ceil(x, p);
    ASSERT_TRUE(is_well_formed(q, p));
    const BigInt v = sw_value(q);
    ASSERT_GE(v, x);
    if (bit_length(x) <= g) {
      ASSERT_EQ(v, x);
    }
    // Decrementing the mantissa (or renormalizing down) must drop below x.
    if (q.w > 0) {
      SWInt below{q.w - 1, q.s};
      if (q.s > 0 && below.w < (1ull << (g - 1))) below = SWInt{static_cast<std::uint32_t>((1ull << g) - 1), q.s - 1};
      ASSERT_LT(sw_value(below), x);
    }
    if (x > 0) {
      // Expansion factor below 1 + 2^(1-g): v * 2^(g-1) < x * (2^(g-1) + 1).
      ASSERT_LT(v << (g - 1), x * ((BigInt(1) << (g - 1)) + 1));
    }
    if (iter % 8 == 0) {
      ASSERT_EQ(v, brute_sw_ceil_value(x, g));
    }
  }
}

TEST(SwCeil, Monotone) {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 20000; ++iter) {
    const Precision p(4 + rng() % 29);
    BigInt a = rng() >> (rng() % 64);
    BigInt b = rng() >> (rng() % 64);
    if (a > b) std::swap(a, b);
    ASSERT_LE(sw_value(sw_ceil(a, p)), sw_value(sw_ceil(b, p)));
  }
}

TEST(SwSumCeil, Examples) {
  const std::vector<SWInt> a{{12, 2}, {13, 0}};
  EXPECT_EQ(sw_sum_ceil(a, Precision(4)), (SWInt{8, 3}));
  const std::vector<SWInt> ones{{1, 0}, {1, 0}};
  EXPECT_EQ(sw_sum_ceil(ones, Precision(4)), (SWInt{2, 0}));
  const std::vector<SWInt> fig{{35, 0}, {21, 0}};
  EXPECT_EQ(sw_value(sw_sum_ceil(fig, Precision(8))), 56);
}

SWInt random_swint(std::mt19937_64& rng, unsigned g, unsigned max_shift) {
  const std::uint32_t s = static_cast<std::uint32_t>(rng() % (max_shift + 1));
  if (s == 0) return SWInt{static_cast<std::uint32_t>(rng() % (1ull << g)), 0};
  const std::uint64_t lo = 1ull << (g - 1);
  return SWInt{static_cast<std::uint32_t>(lo + rng() % lo), s};
}

TEST(SwSumCeil, DelayedRoundingEqualsExactSum) {
  std::mt19937_64 rng(3);
  for (int iter = 0; iter < 20000; ++iter) {
    const unsigned g = 4 + rng() % 29;
    const Precision p(g);
    const unsigned max_shift = (iter % 3 == 0) ? 200 : 8;
    std::vector<SWInt> terms(1 + rng() % 5);
    for (auto& t : terms) t = random_swint(rng, g, max_shift);
    BigInt exact = 0;
    for (const auto& t : terms) exact += sw_value(t);
    ASSERT_EQ(sw_value(sw_sum_ceil(terms, p)), brute_sw_ceil_value(exact, g));
  }
}

TEST(SwAddCeil, FarApartShiftsUseStickyPath) {
  const Precision p(32);
  const SWInt big{0x80000001u, 300};
  const SWInt tiny{5, 0};
  EXPECT_EQ(sw_add_ceil(big, tiny, p), (SWInt{0x80000002u, 300}));
  EXPECT_EQ(sw_add_ceil(tiny, big, p), (SWInt{0x80000002u, 300}));
  const SWInt top{0xFFFFFFFFu, 100};
  EXPECT_EQ(sw_add_ceil(top, SWInt{1, 0}, p), (SWInt{0x80000000u, 101}));
  EXPECT_EQ(sw_add_ceil(SWInt::zero(), top, p), top);
}

TEST(SwMulCeil, Examples) {
  EXPECT_EQ(sw_mul_ceil(3, {10, 0}, Precision(4)), (SWInt{15, 1}));
  EXPECT_EQ(sw_value(sw_mul_ceil(3, {10, 0}, Precision(4))), 30);
  EXPECT_EQ(sw_mul_ceil(1, {12, 2}, Precision(4)), (SWInt{12, 2}));
  EXPECT_EQ(sw_value(sw_mul_ceil(5, {6, 0}, Precision(5))), 30);
}

TEST(SwMulCeil, MatchesExactProduct) {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 20000; ++iter) {
    const unsigned g = 4 + rng() % 29;
    const SWInt q = random_swint(rng, g, 100);
    const std::uint64_t r = 1 + (rng() >> (rng() % 64));
    ASSERT_EQ(sw_value(sw_mul_ceil(r, q, Precision(g))), brute_sw_ceil_value(BigInt(r) * sw_value(q), g));
  }
}

TEST(Precision, RejectsOutOfRange) {
  EXPECT_THROW(Precision(3), Error);
  EXPECT_THROW(Precision(33), Error);
  EXPECT_NO_THROW(Precision(4));
}

}  // namespace
}  // namespace qi
