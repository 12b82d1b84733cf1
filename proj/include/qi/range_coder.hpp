#pragma once

// Baseline: a static binary order-0 range coder (32-bit range, byte-wise
// renormalization with carry propagation through a cached byte). The model
// is the block's exact frequency k/m, the same information QI transmits.

#include <cstdint>
#include <span>
#include <vector>

#include "qi/error.hpp"

namespace qi::ac {

namespace detail {

constexpr std::uint32_t kTop = 1u << 24;

/// P(bit = 0) as a 32-bit fraction.
inline std::uint64_t zero_probability(std::uint64_t m, std::uint64_t k) {
  if (m == 0) return 0;
  return ((m - k) << 32) / m;
}

/// Split point of `range`; forced away from the ends while both bits stay possible.
inline std::uint32_t split(std::uint32_t range, std::uint64_t p0, std::uint64_t m, std::uint64_t k) {
  auto bound = static_cast<std::uint32_t>((std::uint64_t{range} * p0) >> 32);
  if (k < m && bound == 0) bound = 1;
  if (k > 0 && bound >= range) bound = range - 1;
  if (k == 0) bound = range;
  return bound;
}

}  // namespace detail

inline std::vector<std::uint8_t> ac_encode(std::span<const std::uint8_t> bits, std::uint64_t k) {
  const std::uint64_t m = bits.size();
  if (k > m) fail(ErrorCode::invalid_argument, "more ones than bits");
  const std::uint64_t p0 = detail::zero_probability(m, k);
  std::vector<std::uint8_t> out;
  out.reserve(m / 8 + 16);
  std::uint64_t low = 0;
  std::uint32_t range = 0xFFFFFFFFu;
  std::uint8_t cache = 0;
  std::uint64_t cache_size = 1;

  auto shift_low = [&] {
    if (static_cast<std::uint32_t>(low) < 0xFF000000u || (low >> 32) != 0) {
      const auto carry = static_cast<std::uint8_t>(low >> 32);
      std::uint8_t pending = cache;
      do {
        out.push_back(static_cast<std::uint8_t>(pending + carry));
        pending = 0xFF;
      } while (--cache_size != 0);
      cache = static_cast<std::uint8_t>(low >> 24);
    }
    ++cache_size;
    low = (low & 0x00FFFFFFu) << 8;
  };

  for (const std::uint8_t bit : bits) {
    const std::uint32_t bound = detail::split(range, p0, m, k);
    if (!bit) {
      range = bound;
    } else {
      low += bound;
      range -= bound;
    }
    while (range < detail::kTop) {
      range <<= 8;
      shift_low();
    }
  }
  for (int i = 0; i < 5; ++i) shift_low();
  return out;
}

inline std::vector<std::uint8_t> ac_decode(std::span<const std::uint8_t> payload, std::uint64_t m, std::uint64_t k) {
  if (k > m) fail(ErrorCode::invalid_argument, "more ones than bits");
  if (payload.size() < 5 || payload[0] != 0) fail(ErrorCode::corrupt_stream, "range coder payload too short or bad lead byte");
  const std::uint64_t p0 = detail::zero_probability(m, k);
  std::size_t pos = 1;
  auto next = [&]() -> std::uint8_t {
    if (pos >= payload.size()) fail(ErrorCode::corrupt_stream, "range coder payload exhausted");
    return payload[pos++];
  };
  std::uint32_t code = 0;
  for (int i = 0; i < 4; ++i) code = (code << 8) | next();
  std::uint32_t range = 0xFFFFFFFFu;
  std::vector<std::uint8_t> bits(m, 0);
  std::uint64_t ones = 0;
  for (std::uint64_t i = 0; i < m; ++i) {
    const std::uint32_t bound = detail::split(range, p0, m, k);
    if (code < bound) {
      range = bound;
    } else {
      code -= bound;
      range -= bound;
      bits[i] = 1;
      ++ones;
    }
    while (range < detail::kTop) {
      range <<= 8;
      code = (code << 8) | next();
    }
  }
  if (ones != k) fail(ErrorCode::corrupt_stream, "decoded ones count differs from the model");
  return bits;
}

}  // namespace qi::ac
