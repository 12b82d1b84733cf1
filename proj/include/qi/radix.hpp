#pragma once

// Quantized mixed-radix numbers: weights L_i = [R_i * L_{i-1}]_sw, L_0 = 1.
// Digit i contributes d_i * L_{i-1}; since L_i >= R_i * L_{i-1} the digits
// always decode, at a redundancy of at most log2(1 + 2^(1-g)) bits per digit.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qi/codec.hpp"
#include "qi/error.hpp"
#include "qi/swi.hpp"

namespace qi {

class RadixTable {
 public:
  RadixTable(std::span<const std::uint32_t> radices, Precision g) : g_(g), radices_(radices.begin(), radices.end()) {
    lengths_.reserve(radices_.size() + 1);
    lengths_.push_back(SWInt::one());
    for (const std::uint32_t r : radices_) {
      if (r == 0) fail(ErrorCode::invalid_argument, "radix must be at least 1");
      lengths_.push_back(sw_mul_ceil(r, lengths_.back(), g));
    }
  }

  Precision precision() const noexcept { return g_; }
  std::size_t size() const noexcept { return radices_.size(); }
  std::span<const std::uint32_t> radices() const noexcept { return radices_; }
  /// L_0 .. L_n.
  std::span<const SWInt> lengths() const noexcept { return lengths_; }
  SWInt total() const noexcept { return lengths_.back(); }

 private:
  Precision g_;
  std::vector<std::uint32_t> radices_;
  std::vector<SWInt> lengths_;
};

/// Permutation weights L_i = [i * L_{i-1}]_sw.
class PermTable {
 public:
  PermTable(std::uint32_t n, Precision g) : radix_(identity_radices(n), g) {}

  std::uint32_t n() const noexcept { return static_cast<std::uint32_t>(radix_.size()); }
  const RadixTable& radix() const noexcept { return radix_; }
  SWInt total() const noexcept { return radix_.total(); }

 private:
  static std::vector<std::uint32_t> identity_radices(std::uint32_t n) {
    std::vector<std::uint32_t> r(n);
    for (std::uint32_t i = 0; i < n; ++i) r[i] = i + 1;
    return r;
  }

  RadixTable radix_;
};

inline BitAccumulator radix_encode(std::span<const std::uint32_t> digits, const RadixTable& rt) {
  if (digits.size() != rt.size()) fail(ErrorCode::inconsistent_parameters, "digit count differs from radix count");
  BitAccumulator index;
  const auto lengths = rt.lengths();
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] >= rt.radices()[i])
      fail(ErrorCode::digit_out_of_range, "digit " + std::to_string(i) + " not below its radix");
    index.add_shifted(std::uint64_t{digits[i]} * lengths[i].w, lengths[i].s);
  }
  return index;
}

inline std::vector<std::uint32_t> radix_decode(BitAccumulator index, const RadixTable& rt) {
  const SWInt total = rt.total();
  if (index.ge_shifted(total.w, total.s)) fail(ErrorCode::corrupt_stream, "mixed-radix index beyond L_n");
  const auto lengths = rt.lengths();
  std::vector<std::uint32_t> digits(rt.size());
  for (std::size_t i = rt.size(); i-- > 0;) {
    const SWInt q = lengths[i];
    // index < L_{i+1} <= 2^(q.s + 66), so the quotient fits a 128-bit window.
    if (index.bit_length() > std::uint64_t{q.s} + 128) fail(ErrorCode::corrupt_stream, "mixed-radix digit overflow");
    const detail::u128 window =
        (detail::u128{index.extract(q.s + 64, 64)} << 64) | index.extract(q.s, 64);
    const detail::u128 d = window / q.w;
    if (d >= rt.radices()[i]) fail(ErrorCode::corrupt_stream, "mixed-radix index falls in a quantization gap");
    digits[i] = static_cast<std::uint32_t>(d);
    index.sub_shifted(static_cast<std::uint64_t>(d) * q.w, q.s);
  }
  return digits;
}

/// Left-inversion counts: c_i = number of earlier elements greater than perm[i].
inline std::vector<std::uint32_t> lehmer_digits(std::span<const std::uint32_t> perm) {
  const std::size_t n = perm.size();
  std::vector<std::uint8_t> seen(n, 0);
  for (const std::uint32_t v : perm) {
    if (v >= n || seen[v]) fail(ErrorCode::invalid_argument, "not a permutation of 0..n-1");
    seen[v] = 1;
  }
  std::vector<std::uint32_t> c(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) c[i] += perm[j] > perm[i] ? 1 : 0;
  return c;
}

inline BitAccumulator perm_rank(std::span<const std::uint32_t> perm, const PermTable& pt) {
  if (perm.size() != pt.n()) fail(ErrorCode::inconsistent_parameters, "permutation length differs from table");
  return radix_encode(lehmer_digits(perm), pt.radix());
}

inline std::vector<std::uint32_t> perm_unrank(const BitAccumulator& index, std::uint32_t n, const PermTable& pt) {
  if (n != pt.n()) fail(ErrorCode::inconsistent_parameters, "permutation length differs from table");
  const std::vector<std::uint32_t> c = radix_decode(index, pt.radix());
  // Position i holds the c_i-th largest of the values not used by later positions.
  std::vector<std::uint32_t> remaining(n);
  for (std::uint32_t v = 0; v < n; ++v) remaining[v] = v;
  std::vector<std::uint32_t> perm(n);
  for (std::size_t i = n; i-- > 0;) {
    const std::size_t pos = remaining.size() - 1 - c[i];
    perm[i] = remaining[pos];
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pos));
  }
  return perm;
}

}  // namespace qi
