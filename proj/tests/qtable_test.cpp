#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "qi/oracle.hpp"
#include "qi/qtable.hpp"
#include "test_oracles.hpp"

namespace qi {
namespace {

TEST(BuildTable, WorkedExampleValuesAtEightBits) {
  const QuantTable t = build_table(8, Precision(8));
  EXPECT_EQ(sw_value(t.lookup(5, 3)), 56);
  EXPECT_EQ(sw_value(t.lookup(4, 3)), 35);
  EXPECT_EQ(sw_value(t.lookup(5, 2)), 21);
}

TEST(BuildTable, RoundsUpAtFourBits) {
  const QuantTable t = build_table(8, Precision(4));
  EXPECT_EQ(sw_value(t.lookup(3, 3)), 20);
  EXPECT_EQ(sw_value(t.lookup(4, 2)), 15);
  EXPECT_EQ(sw_value(t.lookup(4, 3)), 36);
}

TEST(BuildTable, AxesHoldOne) {
  for (unsigned g : {4u, 13u, 32u}) {
    const QuantTable t = build_table(300, Precision(g));
    for (int i = 0; i <= 300; ++i) {
      ASSERT_EQ(t.lookup(i, 0), SWInt::one());
      ASSERT_EQ(t.lookup(0, i), SWInt::one());
    }
  }
}

TEST(BuildTable, CapacityAndArgumentErrors) {
  EXPECT_THROW(build_table(0, Precision(8)), Error);
  try {
    build_table(5000, Precision(8), 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::capacity);
  }
}

TEST(Lookup, UnreachableAndOrigin) {
  const QuantTable t = build_table(8, Precision(8));
  EXPECT_EQ(t.lookup(-1, 5), SWInt::zero());
  EXPECT_EQ(t.lookup(3, -1), SWInt::zero());
  EXPECT_EQ(sw_value(t.lookup(0, 0)), 1);
  EXPECT_THROW(t.lookup(5, 4), Error);
}

TEST(BuildTable, MatchesBigIntegerRecurrence) {
  for (unsigned g : {4u, 5u, 6u, 8u, 12u}) {
    const unsigned n_max = 96;
    const QuantTable t = build_table(n_max, Precision(g));
    const auto ref = testing::big_quant_table(n_max, g);
    for (unsigned n = 0; n <= n_max; ++n)
      for (unsigned k = 0; k <= n; ++k) {
        ASSERT_TRUE(is_well_formed(t.at(n, k), Precision(g)));
        ASSERT_EQ(sw_value(t.at(n, k)), ref[n][k]) << "g=" << g << " n=" << n << " k=" << k;
      }
  }
}

TEST(BuildTable, MajorizesBinomialsAndIsSymmetric) {
  const oracle::ExactCounts counts(300);
  for (unsigned g : {4u, 8u, 16u, 32u}) {
    const QuantTable t = build_table(300, Precision(g));
    for (unsigned n = 0; n <= 300; ++n)
      for (unsigned k = 0; k <= n; ++k) {
        ASSERT_GE(sw_value(t.at(n, k)), counts.binom(n, k));
        ASSERT_EQ(t.at(n, k), t.at(n, n - k));
      }
  }
}

TEST(BuildTable, ExactRegime) {
  // C(40, 20) has 37 bits; no rounding can occur at g = 32 up to n = 34.
  const QuantTable t = build_table(34, Precision(32));
  ASSERT_LE(bit_length(oracle::binom(34, 17)), 32u);
  for (unsigned n = 0; n <= 34; ++n)
    for (unsigned k = 0; k <= n; ++k) ASSERT_EQ(sw_value(t.at(n, k)), oracle::binom(n, k));
}

TEST(ExcessProfile, ZeroInExactRegime) {
  const QuantTable t = build_table(30, Precision(32));
  const RedundancyReport r = excess_profile(t, 30);
  EXPECT_EQ(r.max_excess_bits, 0.0);
  EXPECT_EQ(r.avg_excess_bits, 0.0);
}

TEST(ExcessProfile, PinnedAtEightBitsFront256) {
  // Frozen from the big-integer recurrence with brute-force rounding and
  // long-double logarithms, independently of the library's table.
  constexpr double kMax = 0.83123718132826241;
  constexpr double kAvg = 0.69833855501939424;
  const auto ref = testing::big_quant_table(256, 8);
  long double max = 0, sum = 0;
  for (unsigned k = 0; k <= 256; ++k) {
    const long double e = std::log2(ref[256][k].convert_to<long double>()) -
                          std::log2(oracle::binom(256, k).convert_to<long double>());
    max = std::max(max, e);
    sum += e;
  }
  EXPECT_NEAR(static_cast<double>(max), kMax, 1e-9);
  EXPECT_NEAR(static_cast<double>(sum / 257), kAvg, 1e-9);

  const RedundancyReport r = excess_profile(build_table(256, Precision(8)), 256);
  EXPECT_NEAR(r.max_excess_bits, kMax, 1e-9);
  EXPECT_NEAR(r.avg_excess_bits, kAvg, 1e-9);
  EXPECT_NEAR(r.theoretical_bound_bits, 256 * std::log2(std::exp(1.0)) / 128, 1e-12);
  EXPECT_LT(r.max_excess_bits, r.theoretical_bound_bits);
}

TEST(ReconstructShift, Examples) {
  const QuantTable t8 = build_table(8, Precision(8));
  EXPECT_EQ(reconstruct_shift(t8, 8, 3), 0u);
  EXPECT_EQ(reconstruct_shift(t8, 1, 0), 0u);
  const QuantTable t16 = build_table(64, Precision(16));
  EXPECT_EQ(reconstruct_shift(t16, 64, 32), t16.at(64, 32).bit_length() - 16);
  EXPECT_EQ(reconstruct_shift(t16, 64, 32), t16.at(64, 32).s);
}

TEST(ReconstructShift, EqualsStoredShiftEverywhere) {
  for (unsigned g : {4u, 9u, 13u, 32u}) {
    const QuantTable t = build_table(1024, Precision(g));
    for (std::uint32_t n = 0; n <= 1024; ++n)
      for (std::uint32_t k = 0; k <= n; ++k) ASSERT_EQ(reconstruct_shift(t, n, k), t.at(n, k).s);
  }
}

TEST(MinPrecision, Examples) {
  EXPECT_EQ(min_precision(4096, 1), 14u);
  EXPECT_EQ(min_precision(4096, 4096), 4u);
  // 1 + log2(log2 e) + 20 + log2(10) = 24.85
  EXPECT_EQ(min_precision(1 << 20, 0.1), 25u);
  EXPECT_EQ(min_precision(1e30, 1e-9), 32u);
  EXPECT_THROW(min_precision(0, 1), Error);
  EXPECT_THROW(min_precision(10, 0), Error);
}

TEST(TableFile, DumpLoadRoundTrip) {
  const QuantTable t = build_table(100, Precision(12));
  const auto bytes = dump_table(t);
  ASSERT_EQ(bytes.size(), 9 + QuantTable::entry_count(100) * 6);
  EXPECT_EQ(bytes[4], 12);
  const QuantTable back = load_table(bytes);
  EXPECT_EQ(back.n_max(), 100u);
  EXPECT_TRUE(std::equal(back.mantissas().begin(), back.mantissas().end(), t.mantissas().begin()));
  EXPECT_TRUE(std::equal(back.shifts().begin(), back.shifts().end(), t.shifts().begin()));
}

TEST(TableFile, RejectsDamage) {
  auto bytes = dump_table(build_table(20, Precision(6)));
  auto bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(load_table(bad), Error);
  bad = bytes;
  bad.pop_back();
  EXPECT_THROW(load_table(bad), Error);
  bad = bytes;
  bad[9 + 6 * 50] ^= 1;
  EXPECT_THROW(load_table(bad), Error);
}

}  // namespace
}  // namespace qi
