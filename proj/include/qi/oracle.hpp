#pragma once

// Exact enumerative coding with unlimited precision. This is the reference
// every quantized result is checked against; it favours clarity over speed.

#include <cstdint>
#include <span>
#include <vector>

#include "qi/bigint.hpp"
#include "qi/error.hpp"

namespace qi::oracle {

/// Exact binomials, memoized as Pascal rows up to `memo_rows`; larger
/// arguments fall back to the multiplicative formula. Immutable after
/// construction, so concurrent reads are safe.
class ExactCounts {
 public:
  explicit ExactCounts(std::uint32_t memo_rows = 256) : rows_(memo_rows + 1) {
    rows_[0] = {BigInt(1)};
    for (std::uint32_t n = 1; n <= memo_rows; ++n) {
      auto& row = rows_[n];
      const auto& prev = rows_[n - 1];
      row.resize(n + 1);
      row[0] = row[n] = 1;
      for (std::uint32_t k = 1; k < n; ++k) row[k] = prev[k - 1] + prev[k];
    }
  }

  std::uint32_t memo_rows() const noexcept { return static_cast<std::uint32_t>(rows_.size() - 1); }

  BigInt binom(std::int64_t n, std::int64_t k) const {
    if (n < 0 || k < 0 || k > n) return 0;
    if (n < static_cast<std::int64_t>(rows_.size())) return rows_[n][k];
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
      r *= n - k + i;
      r /= i;
    }
    return r;
  }

  /// C(n, 0..n).
  std::vector<BigInt> row(std::uint32_t n) const {
    if (n < rows_.size()) return rows_[n];
    std::vector<BigInt> out(n + 1);
    out[0] = 1;
    for (std::uint32_t k = 0; k < n; ++k) out[k + 1] = out[k] * (n - k) / (k + 1);
    return out;
  }

 private:
  std::vector<std::vector<BigInt>> rows_;
};

inline const ExactCounts& shared_counts() {
  static const ExactCounts counts;
  return counts;
}

inline BigInt binom(std::int64_t n, std::int64_t k) { return shared_counts().binom(n, k); }

/// Colex rank: sum over the j-th one (1-based) at 0-based offset n_j of C(n_j, j).
inline BigInt rank_exact(std::span<const std::uint8_t> bits) {
  BigInt rank = 0;
  std::int64_t j = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) rank += binom(static_cast<std::int64_t>(i), ++j);
  }
  return rank;
}

/// The unique n-bit string with k ones and colex rank `index`.
inline std::vector<std::uint8_t> unrank_exact(const BigInt& index, std::uint32_t n, std::uint32_t k) {
  if (k > n || index < 0 || index >= binom(n, k)) fail(ErrorCode::rank_out_of_range, "rank outside [0, C(n, k))");
  std::vector<std::uint8_t> bits(n, 0);
  BigInt rest = index;
  std::int64_t limit = n;  // offsets of later ones are strictly below this
  for (std::int64_t j = k; j >= 1; --j) {
    std::int64_t c = limit - 1;
    while (binom(c, j) > rest) --c;
    bits[static_cast<std::size_t>(c)] = 1;
    rest -= binom(c, j);
    limit = c;
  }
  return bits;
}

/// n! / (c_1! c_2! ... c_a!).
inline BigInt multinomial(std::span<const std::uint64_t> counts) {
  BigInt result = 1;
  std::uint64_t total = 0;
  for (const std::uint64_t c : counts) {
    // C(total + c, c) by the multiplicative formula keeps intermediates exact.
    for (std::uint64_t i = 1; i <= c; ++i) {
      result *= total + i;
      result /= i;
    }
    total += c;
  }
  return result;
}

}  // namespace qi::oracle
