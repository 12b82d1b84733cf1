#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "qi/radix.hpp"
#include "test_oracles.hpp"

namespace qi {
namespace {

TEST(Radix, ExactExamples) {
  const std::vector<std::uint32_t> radices{2, 3, 5};
  const RadixTable rt(radices, Precision(16));
  EXPECT_EQ(sw_value(rt.total()), 30);
  const std::vector<std::uint32_t> d{1, 2, 4};
  EXPECT_EQ(radix_encode(d, rt).to_big(), 29);
  const std::vector<std::uint32_t> e{0, 0, 1};
  EXPECT_EQ(radix_encode(e, rt).to_big(), 6);
  EXPECT_EQ(radix_decode(BitAccumulator(29), rt), d);
  EXPECT_EQ(radix_decode(BitAccumulator(6), rt), e);
}

TEST(Radix, LengthsAreRoundedProducts) {
  std::mt19937_64 rng(2);
  for (unsigned g : {4u, 8u, 16u, 32u}) {
    std::vector<std::uint32_t> radices(300);
    for (auto& r : radices) r = 1 + static_cast<std::uint32_t>(rng() % 70000);
    const RadixTable rt(radices, Precision(g));
    BigInt prev = 1;
    BigInt exact = 1;
    ASSERT_EQ(sw_value(rt.lengths()[0]), 1);
    for (std::size_t i = 0; i < radices.size(); ++i) {
      const BigInt want = testing::brute_sw_ceil_value(prev * radices[i], g);
      ASSERT_EQ(sw_value(rt.lengths()[i + 1]), want);
      exact *= radices[i];
      ASSERT_GE(want, exact);
      prev = want;
    }
  }
}

TEST(Radix, RoundTripAndOrder) {
  std::mt19937_64 rng(9);
  for (unsigned g : {6u, 12u, 32u}) {
    std::vector<std::uint32_t> radices(200);
    for (auto& r : radices) r = 1 + static_cast<std::uint32_t>(rng() % 1000);
    const RadixTable rt(radices, Precision(g));
    for (int iter = 0; iter < 100; ++iter) {
      std::vector<std::uint32_t> digits(radices.size());
      for (std::size_t i = 0; i < digits.size(); ++i) digits[i] = static_cast<std::uint32_t>(rng() % radices[i]);
      const BitAccumulator idx = radix_encode(digits, rt);
      ASSERT_LT(idx.to_big(), sw_value(rt.total()));
      ASSERT_EQ(radix_decode(idx, rt), digits);
    }
  }
}

TEST(Radix, InjectiveWithGapsAtLowPrecision) {
  const std::vector<std::uint32_t> radices{3, 3, 3};
  const RadixTable rt(radices, Precision(4));
  // L = 1, 3, 9, 28 at four bits; 27 is never produced.
  EXPECT_EQ(sw_value(rt.total()), 28);
  std::set<BigInt> seen;
  for (std::uint32_t a = 0; a < 3; ++a)
    for (std::uint32_t b = 0; b < 3; ++b)
      for (std::uint32_t c = 0; c < 3; ++c) {
        const std::vector<std::uint32_t> d{a, b, c};
        ASSERT_TRUE(seen.insert(radix_encode(d, rt).to_big()).second);
      }
  EXPECT_EQ(seen.count(27), 0u);
  try {
    radix_decode(BitAccumulator(27), rt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::corrupt_stream);
  }
  EXPECT_THROW(radix_decode(BitAccumulator(28), rt), Error);
}

TEST(Radix, Errors) {
  const std::vector<std::uint32_t> radices{2, 3, 5};
  const RadixTable rt(radices, Precision(16));
  const std::vector<std::uint32_t> big{0, 3, 0};
  try {
    radix_encode(big, rt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::digit_out_of_range);
  }
  const std::vector<std::uint32_t> short_digits{0, 0};
  EXPECT_THROW(radix_encode(short_digits, rt), Error);
  const std::vector<std::uint32_t> zero_radix{2, 0};
  EXPECT_THROW(RadixTable(zero_radix, Precision(16)), Error);
}

TEST(Perm, MatchesFactorialNumberSystemWhenExact) {
  const PermTable pt(8, Precision(32));
  std::vector<std::uint32_t> perm(8);
  std::iota(perm.begin(), perm.end(), 0u);
  std::set<std::uint64_t> seen;
  do {
    const BitAccumulator r = perm_rank(perm, pt);
    ASSERT_EQ(r.to_big(), testing::lehmer_rank(perm));
    ASSERT_EQ(perm_unrank(r, 8, pt), perm);
    seen.insert(static_cast<std::uint64_t>(r.to_big()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  EXPECT_EQ(seen.size(), 40320u);
  EXPECT_EQ(*seen.rbegin(), 40319u);
}

TEST(Perm, LehmerDigitsExample) {
  const std::vector<std::uint32_t> perm{2, 0, 3, 1};
  EXPECT_EQ(lehmer_digits(perm), (std::vector<std::uint32_t>{0, 1, 0, 2}));
  const std::vector<std::uint32_t> bad{0, 0, 1};
  EXPECT_THROW(lehmer_digits(bad), Error);
}

TEST(Perm, LargeRoundTrip) {
  std::mt19937_64 rng(4);
  for (unsigned g : {8u, 16u, 32u}) {
    const PermTable pt(2000, Precision(g));
    std::vector<std::uint32_t> perm(2000);
    std::iota(perm.begin(), perm.end(), 0u);
    for (int iter = 0; iter < 3; ++iter) {
      std::shuffle(perm.begin(), perm.end(), rng);
      const BitAccumulator r = perm_rank(perm, pt);
      ASSERT_LE(r.bit_length(), pt.total().bit_length());
      ASSERT_EQ(perm_unrank(r, 2000, pt), perm);
    }
  }
}

}  // namespace
}  // namespace qi
