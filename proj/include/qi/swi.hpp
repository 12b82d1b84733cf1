#pragma once

// Sliding window integers: values w * 2^s with a g-bit mantissa w. Arithmetic
// on them is integer-exact; the only rounding is the explicit SW ceiling.

#include <bit>
#include <cstdint>
#include <span>
#include <string>

#include "qi/bigint.hpp"
#include "qi/error.hpp"

namespace qi {

/// Mantissa width g in bits, 4..32.
class Precision {
 public:
  static constexpr unsigned kMin = 4;
  static constexpr unsigned kMax = 32;

  constexpr explicit Precision(unsigned bits) : bits_(bits) {
    if (bits < kMin || bits > kMax) fail(ErrorCode::invalid_argument, "precision must be in [4, 32], got " + std::to_string(bits));
  }

  constexpr unsigned bits() const noexcept { return bits_; }
  constexpr std::uint64_t mantissa_limit() const noexcept { return std::uint64_t{1} << bits_; }

  friend constexpr bool operator==(Precision, Precision) = default;

 private:
  unsigned bits_;
};

struct SWInt {
  std::uint32_t w = 0;
  std::uint32_t s = 0;

  static constexpr SWInt zero() noexcept { return {0, 0}; }
  static constexpr SWInt one() noexcept { return {1, 0}; }

  constexpr bool is_zero() const noexcept { return w == 0; }
  /// Bit length of the represented value.
  constexpr std::uint64_t bit_length() const noexcept {
    return w == 0 ? 0 : static_cast<std::uint64_t>(std::bit_width(w)) + s;
  }

  friend constexpr bool operator==(SWInt, SWInt) = default;
};

inline bool is_well_formed(SWInt q, Precision g) noexcept {
  if (q.w >= g.mantissa_limit()) return false;
  if (q.s == 0) return true;
  return q.w >= (std::uint64_t{1} << (g.bits() - 1));
}

inline BigInt sw_value(SWInt q) { return BigInt(q.w) << q.s; }

namespace detail {

using u128 = unsigned __int128;

inline unsigned bit_width128(u128 x) noexcept {
  const auto hi = static_cast<std::uint64_t>(x >> 64);
  return hi ? 64 + std::bit_width(hi) : std::bit_width(static_cast<std::uint64_t>(x));
}

// Smallest SWInt >= hi * 2^base + e, where 0 < e < 2^base when `sticky`
// (e = 0 otherwise). A sticky remainder must lie entirely below the rounding
// position, which holds whenever hi carries at least g significant bits.
inline SWInt ceil_parts(u128 hi, std::uint32_t base, bool sticky, Precision g) noexcept {
  const unsigned gb = g.bits();
  if (hi == 0) {
    // Only a sub-2^base sticky residue; its ceiling is 2^base at the coarsest.
    if (!sticky) return SWInt::zero();
    if (base < gb) return SWInt{std::uint32_t{1} << base, 0};
    return SWInt{std::uint32_t{1} << (gb - 1), base - gb + 1};
  }
  const std::uint64_t bl = bit_width128(hi) + std::uint64_t{base};
  if (bl <= gb) {
    // Fits the window exactly at s = 0 (sticky implies base > 0, which cannot fit).
    return SWInt{static_cast<std::uint32_t>(hi << base), 0};
  }
  const std::uint64_t s = bl - gb;
  std::uint64_t w;
  bool inexact = sticky;
  if (s >= base) {
    const unsigned drop = static_cast<unsigned>(s - base);
    w = static_cast<std::uint64_t>(hi >> drop);
    if (drop > 0 && (hi & ((u128{1} << drop) - 1)) != 0) inexact = true;
  } else {
    w = static_cast<std::uint64_t>(hi << (base - s));
  }
  if (inexact) ++w;
  std::uint64_t shift = s;
  if (w == g.mantissa_limit()) {
    w >>= 1;
    ++shift;
  }
  return SWInt{static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(shift)};
}

}  // namespace detail

/// Smallest SWInt whose value is >= x.
inline SWInt sw_ceil(const BigInt& x, Precision g) {
  if (x.is_zero()) return SWInt::zero();
  const std::uint64_t bl = bit_length(x);
  if (bl <= g.bits()) return SWInt{static_cast<std::uint32_t>(x), 0};
  const std::uint64_t s = bl - g.bits();
  BigInt w = x >> s;
  if (boost::multiprecision::lsb(x) < s) ++w;
  auto mant = static_cast<std::uint64_t>(w);
  std::uint64_t shift = s;
  if (mant == g.mantissa_limit()) {
    mant >>= 1;
    ++shift;
  }
  return SWInt{static_cast<std::uint32_t>(mant), static_cast<std::uint32_t>(shift)};
}

/// sw_ceil(a + b) without a big-integer round trip. The exact sum lives in a
/// 128-bit window aligned to the smaller shift; a term more than 64 bits below
/// the other only contributes a sticky bit.
inline SWInt sw_add_ceil(SWInt a, SWInt b, Precision g) noexcept {
  if (a.is_zero()) return detail::ceil_parts(b.w, b.s, false, g);
  if (b.is_zero()) return detail::ceil_parts(a.w, a.s, false, g);
  if (a.s < b.s) std::swap(a, b);
  const std::uint32_t gap = a.s - b.s;
  if (gap <= 64) {
    const detail::u128 sum = (detail::u128{a.w} << gap) + b.w;
    return detail::ceil_parts(sum, b.s, false, g);
  }
  // b < 2^(b.s + 32) <= 2^(a.s - 32): strictly below a's rounding position.
  return detail::ceil_parts(a.w, a.s, true, g);
}

/// sw_ceil of the exact sum of all terms; a single rounding at the end.
inline SWInt sw_sum_ceil(std::span<const SWInt> terms, Precision g) {
  if (terms.size() == 2) return sw_add_ceil(terms[0], terms[1], g);
  BigInt sum = 0;
  for (const SWInt t : terms) sum += sw_value(t);
  return sw_ceil(sum, g);
}

/// sw_ceil(r * value(q)).
inline SWInt sw_mul_ceil(std::uint64_t r, SWInt q, Precision g) noexcept {
  return detail::ceil_parts(detail::u128{r} * q.w, q.s, false, g);
}

}  // namespace qi
