#pragma once

// Binary order-0 block coding with quantized colex ranking. Encoding walks the
// block forward and, for every 1-bit, adds the quantized count of the left
// neighbour of the path point at a bit offset; 0-bits cost nothing. Decoding
// walks backward from the block's end point, choosing at each step the
// subinterval that contains the index.

#include <bit>
#include <cassert>
#include <cstdint>
#include <span>
#include <vector>

#include "qi/bigint.hpp"
#include "qi/error.hpp"
#include "qi/qtable.hpp"
#include "qi/swi.hpp"

namespace qi {

/// Non-negative integer as a little-endian array of 64-bit words, supporting
/// add/subtract of a 64-bit value at an arbitrary bit offset.
class BitAccumulator {
 public:
  BitAccumulator() = default;
  explicit BitAccumulator(std::uint64_t value) {
    if (value) words_.push_back(value);
  }

  void reserve_bits(std::uint64_t bits) { words_.reserve(bits / 64 + 2); }

  bool is_zero() const noexcept { return words_.empty(); }

  std::uint64_t bit_length() const noexcept {
    if (words_.empty()) return 0;
    return (words_.size() - 1) * 64 + std::bit_width(words_.back());
  }

  /// *this += value * 2^offset, carrying as far as needed.
  void add_shifted(std::uint64_t value, std::uint64_t offset) {
    if (value == 0) return;
    const std::size_t word = offset / 64;
    const unsigned bit = offset % 64;
    const std::uint64_t lo = value << bit;
    const std::uint64_t hi = bit ? value >> (64 - bit) : 0;
    if (words_.size() < word + 2) words_.resize(word + 2, 0);
    std::uint64_t before = words_[word];
    words_[word] += lo;
    std::uint64_t carry = words_[word] < before ? 1 : 0;
    std::size_t i = word + 1;
    before = words_[i];
    words_[i] += hi + carry;
    carry = (words_[i] < before || (carry && hi == ~std::uint64_t{0})) ? 1 : 0;
    while (carry) {
      if (++i == words_.size()) words_.push_back(0);
      carry = (++words_[i] == 0) ? 1 : 0;
    }
    trim();
  }

  /// *this -= value * 2^offset; the result must stay non-negative.
  void sub_shifted(std::uint64_t value, std::uint64_t offset) {
    if (value == 0) return;
    assert(ge_shifted(value, offset));
    const std::size_t word = offset / 64;
    const unsigned bit = offset % 64;
    const std::uint64_t lo = value << bit;
    const std::uint64_t hi = bit ? value >> (64 - bit) : 0;
    std::uint64_t borrow = words_[word] < lo ? 1 : 0;
    words_[word] -= lo;
    std::size_t i = word + 1;
    if (i < words_.size()) {
      const std::uint64_t take = hi + borrow;
      const bool wrap = borrow && hi == ~std::uint64_t{0};
      borrow = (wrap || words_[i] < take) ? 1 : 0;
      words_[i] -= take;
      while (borrow) {
        ++i;
        borrow = words_[i] == 0 ? 1 : 0;
        --words_[i];
      }
    }
    trim();
  }

  /// *this >= value * 2^offset.
  bool ge_shifted(std::uint64_t value, std::uint64_t offset) const noexcept {
    if (value == 0) return true;
    if (bit_length() > offset + 64) return true;
    return extract(offset, 64) >= value;
  }

  /// Bits [offset, offset + nbits) as an integer, nbits <= 64.
  std::uint64_t extract(std::uint64_t offset, unsigned nbits) const noexcept {
    if (nbits == 0) return 0;
    const std::size_t word = offset / 64;
    const unsigned bit = offset % 64;
    std::uint64_t v = word < words_.size() ? words_[word] >> bit : 0;
    if (bit && word + 1 < words_.size()) v |= words_[word + 1] << (64 - bit);
    return nbits == 64 ? v : v & ((std::uint64_t{1} << nbits) - 1);
  }

  /// Sets bits [offset, offset + nbits) of a value known to have them clear.
  void or_bits(std::uint64_t value, std::uint64_t offset, unsigned nbits) {
    if (nbits < 64) value &= (std::uint64_t{1} << nbits) - 1;
    add_shifted(value, offset);
  }

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  BigInt to_big() const {
    BigInt r = 0;
    for (std::size_t i = words_.size(); i-- > 0;) r = (r << 64) | BigInt(words_[i]);
    return r;
  }

  static BitAccumulator from_big(const BigInt& x) {
    BitAccumulator a;
    const std::uint64_t bl = bit_length_of(x);
    for (std::uint64_t off = 0; off < bl; off += 64) {
      a.words_.push_back(static_cast<std::uint64_t>((x >> off) & BigInt(~std::uint64_t{0})));
    }
    a.trim();
    return a;
  }

  friend bool operator==(const BitAccumulator&, const BitAccumulator&) = default;

 private:
  static std::uint64_t bit_length_of(const BigInt& x) { return qi::bit_length(x); }

  void trim() {
    while (!words_.empty() && words_.back() == 0) words_.pop_back();
  }

  std::vector<std::uint64_t> words_;
};

/// Subintervals of D(M) by last step: paths ending in 0 take [0, lambda0),
/// paths ending in 1 take [lambda0, lambda0 + lambda1).
struct IntervalSplit {
  SWInt lambda0;
  SWInt lambda1;

  static IntervalSplit at(const QuantTable& t, std::int64_t x, std::int64_t y) {
    return {t.lookup(x - 1, y), t.lookup(x, y - 1)};
  }
};

struct BlockCode {
  std::uint32_t m = 0;
  std::uint32_t k = 0;
  BitAccumulator index;

  friend bool operator==(const BlockCode&, const BlockCode&) = default;
};

/// Quantized colex rank of `bits` (each element 0 or 1) within its class (m, k).
inline BlockCode encode_block(std::span<const std::uint8_t> bits, const QuantTable& t) {
  if (bits.size() > t.n_max()) fail(ErrorCode::block_too_long, "block longer than the table's n_max");
  const auto m = static_cast<std::uint32_t>(bits.size());
  const auto w = t.mantissas();
  const auto s = t.shifts();
  BlockCode code;
  code.m = m;
  std::uint32_t y = 0;
  for (std::uint32_t i = 1; i <= m; ++i) {
    if (!bits[i - 1]) continue;
    ++y;
    // Left neighbour of the point after step i: (i - y - 1, y), front i - 1.
    if (y < i) {
      const std::uint64_t e = QuantTable::front_offset(i - 1) + y;
      code.index.add_shifted(w[e], s[e]);
    }
  }
  code.k = y;
  return code;
}

inline void check_block_class(std::uint32_t m, std::uint32_t k, const QuantTable& t) {
  if (m > t.n_max()) fail(ErrorCode::block_too_long, "block longer than the table's n_max");
  if (k > m) fail(ErrorCode::corrupt_index, "more ones than symbols in block");
}

/// Inverse of encode_block.
inline std::vector<std::uint8_t> decode_block(const BlockCode& code, const QuantTable& t) {
  check_block_class(code.m, code.k, t);
  const SWInt top = t.at(code.m, code.k);
  if (code.index.ge_shifted(top.w, top.s)) fail(ErrorCode::corrupt_index, "index outside the class interval");

  std::vector<std::uint8_t> bits(code.m, 0);
  BitAccumulator index = code.index;
  std::uint32_t x = code.m - code.k;
  std::uint32_t y = code.k;
  for (std::uint32_t i = code.m; i >= 1; --i) {
    if (y == 0) {
      // Single path along the x axis; the index must be exhausted.
      if (!index.is_zero()) fail(ErrorCode::corrupt_index, "non-zero index on the zero axis");
      x = 0;
      break;
    }
    if (x == 0) {
      for (std::uint32_t j = 1; j <= i; ++j) bits[j - 1] = 1;
      y = 0;
      break;
    }
    const SWInt lambda0 = t.at(i - 1, y);
    assert(sw_add_ceil(lambda0, t.at(i - 1, y - 1), t.precision()) == t.at(i, y));
    if (index.ge_shifted(lambda0.w, lambda0.s)) {
      index.sub_shifted(lambda0.w, lambda0.s);
      bits[i - 1] = 1;
      --y;
    } else {
      --x;
    }
  }
  if (x != 0 || y != 0 || !index.is_zero()) fail(ErrorCode::corrupt_index, "path did not return to the origin");
  return bits;
}

/// Block index split into a leading digit and a trailing body of plain bits.
struct TipSplit {
  std::uint32_t digit = 0;
  std::uint32_t radix = 1;
  std::uint32_t body_bits = 0;
  BitAccumulator body;
};

inline constexpr unsigned kTipBits = 16;

/// Leading kTipBits bits of value(q), for values longer than kTipBits bits.
inline std::uint32_t leading_tip_bits(SWInt q) noexcept {
  const unsigned bw = std::bit_width(q.w);
  return bw >= kTipBits ? q.w >> (bw - kTipBits) : q.w << (kTipBits - bw);
}

/// Number of plain body bits for class (m, k).
inline std::uint32_t tip_body_bits(std::uint32_t m, std::uint32_t k, const QuantTable& t) {
  check_block_class(m, k, t);
  const std::uint64_t b = t.at(m, k).bit_length();
  return b > kTipBits ? static_cast<std::uint32_t>(b - kTipBits) : 0;
}

/// Digit alphabet size for class (m, k).
inline std::uint32_t tip_radix(std::uint32_t m, std::uint32_t k, const QuantTable& t) {
  check_block_class(m, k, t);
  const SWInt lv = t.at(m, k);
  if (lv.bit_length() <= kTipBits) return lv.w << lv.s;
  return leading_tip_bits(lv) + 1;
}

inline TipSplit split_tip(const BlockCode& code, const QuantTable& t) {
  TipSplit tip;
  tip.radix = tip_radix(code.m, code.k, t);
  tip.body_bits = tip_body_bits(code.m, code.k, t);
  const std::uint64_t top = code.index.bit_length();
  if (top > tip.body_bits + 32) fail(ErrorCode::corrupt_index, "index too long for its class");
  tip.digit = static_cast<std::uint32_t>(code.index.extract(tip.body_bits, 32));
  for (std::uint32_t off = 0; off < tip.body_bits; off += 64) {
    const unsigned n = std::min<std::uint32_t>(64, tip.body_bits - off);
    tip.body.or_bits(code.index.extract(off, n), off, n);
  }
  return tip;
}

inline BlockCode merge_tip(std::uint32_t digit, std::uint32_t radix, const BitAccumulator& body, std::uint32_t m,
                           std::uint32_t k, const QuantTable& t) {
  if (radix != tip_radix(m, k, t)) fail(ErrorCode::inconsistent_parameters, "radix does not match the block class");
  if (digit >= radix) fail(ErrorCode::digit_out_of_range, "tip digit not below its radix");
  const std::uint32_t body_bits = tip_body_bits(m, k, t);
  if (body.bit_length() > body_bits) fail(ErrorCode::corrupt_index, "body longer than its field");
  BlockCode code{m, k, body};
  code.index.add_shifted(digit, body_bits);
  return code;
}

}  // namespace qi
