#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>

namespace qi {

using BigInt = boost::multiprecision::cpp_int;

inline std::uint64_t bit_length(const BigInt& x) {
  return x.is_zero() ? 0 : boost::multiprecision::msb(x) + 1;
}

/// log2(x) for x > 0, from the leading 64 bits.
inline double log2_big(const BigInt& x) {
  const std::uint64_t bl = bit_length(x);
  if (bl <= 64) return std::log2(static_cast<double>(static_cast<std::uint64_t>(x)));
  const auto top = static_cast<std::uint64_t>(x >> (bl - 64));
  return static_cast<double>(bl - 64) + std::log2(static_cast<double>(top));
}

/// log2(num / den) for num >= den > 0, accurate even when the ratio is within 1e-12 of one.
inline double log2_ratio(const BigInt& num, const BigInt& den) {
  if (num == den) return 0.0;
  // (num << 64) / den carries 64 significant fractional bits of the ratio.
  const BigInt scaled = (num << 64) / den;
  return log2_big(scaled) - 64.0;
}

}  // namespace qi
