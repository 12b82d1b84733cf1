#pragma once

// Quantized binomial addend tables. L(x, y) replaces the path count
// C(x + y, y) of the binary lattice: axis points hold 1 and every interior
// point holds the SW ceiling of the exact sum of its two predecessors, built
// front by front (all points with x + y = n are stored contiguously).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qi/bigint.hpp"
#include "qi/bits.hpp"
#include "qi/error.hpp"
#include "qi/oracle.hpp"
#include "qi/swi.hpp"

namespace qi {

/// log2(i!) for i = 0..n in fixed point with 32 fractional bits.
class LogFactorial {
 public:
  static constexpr unsigned kFractionBits = 32;

  LogFactorial() = default;
  explicit LogFactorial(std::uint32_t n) : values_(n + 1, 0) {
    long double acc = 0.0L;
    for (std::uint32_t i = 2; i <= n; ++i) {
      acc += std::log2(static_cast<long double>(i));
      values_[i] = static_cast<std::uint64_t>(std::llround(acc * 4294967296.0L));
    }
  }

  std::uint64_t operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  /// floor(log2 C(n, k)) as estimated from the fixed-point entries; may be off
  /// by one next to a power of two.
  std::int64_t floor_log2_binom(std::uint32_t n, std::uint32_t k) const {
    const auto est = static_cast<std::int64_t>(values_[n] - values_[k] - values_[n - k]);
    return est >> kFractionBits;
  }

 private:
  std::vector<std::uint64_t> values_;
};

class QuantTable {
 public:
  /// Default cap on stored entries (about 200 MB; n_max up to ~8190).
  static constexpr std::uint64_t kDefaultEntryBudget = std::uint64_t{1} << 25;

  static constexpr std::uint64_t entry_count(std::uint32_t n_max) noexcept {
    return (std::uint64_t{n_max} + 1) * (std::uint64_t{n_max} + 2) / 2;
  }
  static constexpr std::uint64_t front_offset(std::uint32_t n) noexcept {
    return std::uint64_t{n} * (n + 1) / 2;
  }

  Precision precision() const noexcept { return g_; }
  std::uint32_t n_max() const noexcept { return n_max_; }

  /// L(x, y); zero for unreachable points (negative coordinates).
  SWInt lookup(std::int64_t x, std::int64_t y) const {
    if (x < 0 || y < 0) return SWInt::zero();
    if (x + y > n_max_) fail(ErrorCode::out_of_range, "lattice point beyond the table's last front");
    return at(static_cast<std::uint32_t>(x + y), static_cast<std::uint32_t>(y));
  }

  /// L(n - k, k), unchecked.
  SWInt at(std::uint32_t n, std::uint32_t k) const noexcept {
    const std::uint64_t i = front_offset(n) + k;
    return SWInt{w_[i], s_[i]};
  }

  std::span<const std::uint32_t> mantissas() const noexcept { return w_; }
  std::span<const std::uint16_t> shifts() const noexcept { return s_; }

  const LogFactorial& log_factorial() const noexcept { return logfact_; }
  /// (entry, shift) for entries whose shift differs from the log-factorial
  /// estimate, sorted by entry.
  std::span<const std::pair<std::uint64_t, std::uint16_t>> shift_exceptions() const noexcept { return shift_exceptions_; }

  friend QuantTable build_table(std::uint32_t n_max, Precision g, std::uint64_t entry_budget);

 private:
  QuantTable(Precision g, std::uint32_t n_max) : g_(g), n_max_(n_max) {}

  std::uint16_t estimated_shift(std::uint32_t n, std::uint32_t k) const {
    const std::int64_t s = logfact_.floor_log2_binom(n, k) + 1 - static_cast<std::int64_t>(g_.bits());
    return static_cast<std::uint16_t>(s > 0 ? s : 0);
  }

  void index_shifts() {
    logfact_ = LogFactorial(n_max_);
    shift_exceptions_.clear();
    for (std::uint32_t n = 0; n <= n_max_; ++n) {
      const std::uint64_t base = front_offset(n);
      for (std::uint32_t k = 0; k <= n; ++k) {
        if (s_[base + k] != estimated_shift(n, k)) shift_exceptions_.emplace_back(base + k, s_[base + k]);
      }
    }
  }

  friend std::uint32_t reconstruct_shift(const QuantTable& t, std::uint32_t n, std::uint32_t k);

  Precision g_;
  std::uint32_t n_max_;
  std::vector<std::uint32_t> w_;
  std::vector<std::uint16_t> s_;
  LogFactorial logfact_;
  std::vector<std::pair<std::uint64_t, std::uint16_t>> shift_exceptions_;
};

inline QuantTable build_table(std::uint32_t n_max, Precision g,
                              std::uint64_t entry_budget = QuantTable::kDefaultEntryBudget) {
  if (n_max < 1) fail(ErrorCode::invalid_argument, "table needs at least one front");
  if (n_max > 65535 || QuantTable::entry_count(n_max) > entry_budget)
    fail(ErrorCode::capacity, "table for n_max=" + std::to_string(n_max) + " exceeds the entry budget");
  QuantTable t(g, n_max);
  const std::uint64_t entries = QuantTable::entry_count(n_max);
  t.w_.resize(entries);
  t.s_.resize(entries);
  t.w_[0] = 1;
  for (std::uint32_t n = 1; n <= n_max; ++n) {
    const std::uint64_t prev = QuantTable::front_offset(n - 1);
    const std::uint64_t cur = QuantTable::front_offset(n);
    t.w_[cur] = 1;
    t.w_[cur + n] = 1;
    for (std::uint32_t k = 1; k < n; ++k) {
      // L(n-k, k) = [L(n-k-1, k) + L(n-k, k-1)]_sw
      const SWInt left{t.w_[prev + k], t.s_[prev + k]};
      const SWInt below{t.w_[prev + k - 1], t.s_[prev + k - 1]};
      const SWInt q = sw_add_ceil(left, below, g);
      t.w_[cur + k] = q.w;
      t.s_[cur + k] = static_cast<std::uint16_t>(q.s);
    }
  }
  t.index_shifts();
  return t;
}

/// Shift s(n - k, k) recomputed from the log-factorial array, with the
/// exceptions recorded at build time. Always equals the stored shift.
inline std::uint32_t reconstruct_shift(const QuantTable& t, std::uint32_t n, std::uint32_t k) {
  if (k > n || n > t.n_max()) fail(ErrorCode::out_of_range, "no such table entry");
  const std::uint64_t i = QuantTable::front_offset(n) + k;
  const auto& ex = t.shift_exceptions_;
  const auto it = std::lower_bound(ex.begin(), ex.end(), i, [](const auto& e, std::uint64_t key) { return e.first < key; });
  if (it != ex.end() && it->first == i) return it->second;
  return t.estimated_shift(n, k);
}

struct RedundancyReport {
  unsigned g = 0;
  std::uint32_t n = 0;
  double max_excess_bits = 0.0;
  double avg_excess_bits = 0.0;
  double theoretical_bound_bits = 0.0;
};

/// Per-symbol redundancy bound log2(e) / 2^(g-1).
inline double per_symbol_bound(Precision g) { return std::log2(std::exp(1.0)) / std::ldexp(1.0, static_cast<int>(g.bits()) - 1); }

/// log2(L / C) statistics over the points of front n.
inline RedundancyReport excess_profile(const QuantTable& t, std::uint32_t n,
                                       const oracle::ExactCounts& counts = oracle::shared_counts()) {
  if (n > t.n_max()) fail(ErrorCode::out_of_range, "front beyond the table");
  const std::vector<BigInt> exact = counts.row(n);
  RedundancyReport r;
  r.g = t.precision().bits();
  r.n = n;
  r.theoretical_bound_bits = n * per_symbol_bound(t.precision());
  double sum = 0.0;
  for (std::uint32_t k = 0; k <= n; ++k) {
    const double excess = log2_ratio(sw_value(t.at(n, k)), exact[k]);
    r.max_excess_bits = std::max(r.max_excess_bits, excess);
    sum += excess;
  }
  r.avg_excess_bits = sum / (n + 1);
  return r;
}

/// Smallest g keeping the total quantization excess for n symbols under c bits.
inline unsigned min_precision(double n, double c) {
  if (!(n >= 1) || !(c > 0)) fail(ErrorCode::invalid_argument, "min_precision needs n >= 1 and c > 0");
  const double g = std::ceil(1.0 + std::log2(std::log2(std::exp(1.0))) + std::log2(n / c));
  return static_cast<unsigned>(std::clamp(g, double{Precision::kMin}, double{Precision::kMax}));
}

// Table file: "QIT1", g (1 byte), n_max (4 bytes), then w (4 bytes) and s
// (2 bytes) per entry in front-major order. All little-endian.

inline std::vector<std::uint8_t> dump_table(const QuantTable& t) {
  std::vector<std::uint8_t> out{'Q', 'I', 'T', '1'};
  le::put(out, t.precision().bits(), 1);
  le::put(out, t.n_max(), 4);
  out.reserve(out.size() + t.mantissas().size() * 6);
  for (std::size_t i = 0; i < t.mantissas().size(); ++i) {
    le::put(out, t.mantissas()[i], 4);
    le::put(out, t.shifts()[i], 2);
  }
  return out;
}

/// Parses a dumped table and checks every entry against the recurrence.
inline QuantTable load_table(std::span<const std::uint8_t> bytes,
                             std::uint64_t entry_budget = QuantTable::kDefaultEntryBudget) {
  if (bytes.size() < 9 || bytes[0] != 'Q' || bytes[1] != 'I' || bytes[2] != 'T' || bytes[3] != '1')
    fail(ErrorCode::bad_magic, "not a table file");
  const auto gbits = static_cast<unsigned>(le::get(bytes, 4, 1));
  if (gbits < Precision::kMin || gbits > Precision::kMax) fail(ErrorCode::corrupt_stream, "bad precision in table file");
  const Precision g(gbits);
  const auto n_max = static_cast<std::uint32_t>(le::get(bytes, 5, 4));
  if (n_max < 1) fail(ErrorCode::corrupt_stream, "empty table file");
  const std::uint64_t entries = QuantTable::entry_count(n_max);
  if (entries > entry_budget) fail(ErrorCode::capacity, "table file exceeds the entry budget");
  if (bytes.size() != 9 + entries * 6) fail(ErrorCode::truncated_stream, "table file size does not match n_max");
  QuantTable table = build_table(n_max, g, entry_budget);
  for (std::uint64_t i = 0; i < entries; ++i) {
    if (le::get(bytes, 9 + i * 6, 4) != table.mantissas()[i] || le::get(bytes, 13 + i * 6, 2) != table.shifts()[i])
      fail(ErrorCode::corrupt_stream, "table entries violate the quantized recurrence");
  }
  return table;
}

inline void save_table_file(const QuantTable& t, const std::string& path) {
  const auto bytes = dump_table(t);
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::invalid_argument, "cannot open " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

inline QuantTable load_table_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::invalid_argument, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return load_table(bytes);
}

}  // namespace qi
