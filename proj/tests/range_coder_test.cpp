#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "qi/oracle.hpp"
#include "qi/range_coder.hpp"
#include "test_oracles.hpp"

namespace qi::ac {
namespace {

std::uint64_t ones(const std::vector<std::uint8_t>& bits) {
  std::uint64_t k = 0;
  for (const auto b : bits) k += b;
  return k;
}

TEST(RangeCoder, RoundTripAcrossDensities) {
  std::mt19937_64 rng(8);
  for (int iter = 0; iter < 300; ++iter) {
    const auto bits = testing::random_bits(rng, rng() % 20000, (rng() % 1001) / 1000.0);
    const auto k = ones(bits);
    const auto payload = ac_encode(bits, k);
    ASSERT_EQ(payload.front(), 0);
    ASSERT_EQ(ac_decode(payload, bits.size(), k), bits);
  }
}

TEST(RangeCoder, SizeNearEnumerativeBound) {
  std::mt19937_64 rng(3);
  for (double density : {0.002, 0.05, 0.5}) {
    const auto bits = testing::random_bits(rng, 65536, density);
    const auto k = ones(bits);
    const double bound = log2_big(oracle::binom(bits.size(), k));
    const double got = 8.0 * ac_encode(bits, k).size();
    EXPECT_GE(got, bound);
    EXPECT_LE(got, bound + 0.5 * std::log2(65536.0) + 64);
  }
}

TEST(RangeCoder, DegenerateModel) {
  const std::vector<std::uint8_t> zeros(4096, 0);
  const auto payload = ac_encode(zeros, 0);
  EXPECT_LE(payload.size() * 8, 64u);
  EXPECT_EQ(ac_decode(payload, 4096, 0), zeros);
}

TEST(RangeCoder, WithinEntropyTolerance) {
  std::mt19937_64 rng(12);
  for (std::uint64_t k : {64u, 128u, 512u, 1024u, 2048u}) {
    std::vector<std::uint8_t> bits(4096, 0);
    for (std::uint64_t placed = 0; placed < k;) {
      auto& b = bits[rng() % 4096];
      if (!b) b = 1, ++placed;
    }
    const double p = static_cast<double>(k) / 4096;
    const double mh = -4096 * (p * std::log2(p) + (1 - p) * std::log2(1 - p));
    const double got = 8.0 * ac_encode(bits, k).size();
    EXPECT_LE(std::fabs(got - mh), 0.001 * mh + 64) << "k=" << k;
  }
}

TEST(RangeCoder, Errors) {
  const std::vector<std::uint8_t> bits{0, 1, 0, 0};
  EXPECT_THROW(ac_encode(bits, 5), Error);
  auto payload = ac_encode(bits, 1);
  auto bad = payload;
  bad[0] = 1;
  EXPECT_THROW(ac_decode(bad, 4, 1), Error);
  EXPECT_THROW(ac_decode(std::vector<std::uint8_t>{0, 0}, 4, 1), Error);
  EXPECT_THROW(ac_decode(payload, 4, 5), Error);
}

}  // namespace
}  // namespace qi::ac
