#pragma once

// QI versus the baseline range coder on random binary inputs of N bits with a
// fixed number of ones. Every cell is round-tripped through both coders
// before its numbers are recorded; only the coding loops are timed.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qi/codec.hpp"
#include "qi/container.hpp"
#include "qi/error.hpp"
#include "qi/qtable.hpp"
#include "qi/range_coder.hpp"

namespace qi::bench {

/// Uniform integer in [0, n) by rejection, so results depend only on the engine.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t v;
  do v = rng(); while (v >= limit);
  return v % n;
}

/// n bits with exactly `ones` set at uniformly random positions.
inline std::vector<std::uint8_t> random_bits(std::mt19937_64& rng, std::uint64_t n, std::uint64_t ones) {
  std::vector<std::uint8_t> bits(n, 0);
  const bool flip = ones > n / 2;
  const std::uint64_t target = flip ? n - ones : ones;
  for (std::uint64_t placed = 0; placed < target;) {
    const std::uint64_t p = uniform_below(rng, n);
    if (!bits[p]) {
      bits[p] = 1;
      ++placed;
    }
  }
  if (flip)
    for (auto& b : bits) b ^= 1;
  return bits;
}

/// Bits of consecutive int32 values centred on a random start (little-endian,
/// LSB first). Stands in for the "Vary" row, whose exact
/// construction is not known.
inline std::vector<std::uint8_t> ramp_bits(std::mt19937_64& rng, std::uint64_t n) {
  std::vector<std::uint8_t> bits;
  bits.reserve(n);
  const std::uint64_t ints = n / 32;
  auto value = static_cast<std::int32_t>(static_cast<std::int64_t>(uniform_below(rng, 65)) - 32 - static_cast<std::int64_t>(ints / 2));
  for (std::uint64_t i = 0; i < ints; ++i, ++value) {
    const auto u = static_cast<std::uint32_t>(value);
    for (unsigned b = 0; b < 32; ++b) bits.push_back(static_cast<std::uint8_t>((u >> b) & 1u));
  }
  return bits;
}

struct Row {
  std::string label;     // "8", "N/64", "Vary", ...
  std::uint64_t n = 0;   // input bits
  double ones = 0;       // mean ones per input
  double qi_payload_bits = 0;
  double qi_count_bits = 0;
  double ac_payload_bits = 0;
  double size_delta_pct = 0;  // (AC / QI - 1) * 100
  double qi_seconds = 0;      // encode + decode, summed over trials
  double ac_seconds = 0;
  double speed_ratio = 0;     // AC time / QI time
};

struct BenchReport {
  unsigned trials = 0;
  std::uint64_t seed = 0;
  std::uint32_t block_size = 0;
  unsigned g = 0;
  std::vector<Row> rows;
};

struct BenchConfig {
  std::vector<std::uint64_t> sizes{4096, 8192, 32768, 131072};
  std::vector<std::string> densities{"8", "16", "32", "N/64", "N/32", "N/16", "N/8", "N/4", "N/2", "Vary"};
  unsigned trials = 20;
  std::uint64_t seed = 1;
  std::uint32_t block_size = 4096;
  unsigned g = 32;
};

inline std::uint64_t ones_for(const std::string& density, std::uint64_t n) {
  if (density.rfind("N/", 0) == 0) return n / std::stoull(density.substr(2));
  return std::stoull(density);
}

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace detail

inline BenchReport run_bench(const BenchConfig& cfg, const QuantTable& table) {
  if (table.precision().bits() != cfg.g || table.n_max() < cfg.block_size)
    fail(ErrorCode::inconsistent_parameters, "bench table does not match the configuration");
  BenchReport report{cfg.trials, cfg.seed, cfg.block_size, cfg.g, {}};
  const StreamParams params{cfg.block_size, Precision(cfg.g)};
  TableCache cache;
  std::mt19937_64 rng(cfg.seed);

  for (const std::string& density : cfg.densities) {
    for (const std::uint64_t n : cfg.sizes) {
      Row row;
      row.label = density;
      row.n = n;
      for (unsigned trial = 0; trial < cfg.trials; ++trial) {
        const std::vector<std::uint8_t> raw =
            density == "Vary" ? ramp_bits(rng, n) : random_bits(rng, n, ones_for(density, n));
        std::uint64_t ones = 0;
        for (const auto b : raw) ones += b;

        // Sizes come from the full container, which is also round-tripped.
        const EncodedStream stream = encode_bits(raw, params, table);
        if (read_stream(stream.bytes, cache).symbols != raw) fail(ErrorCode::corrupt_stream, "QI container round trip failed");
        const PreparedBits prepared = prepare_bits(raw);

        auto start = detail::Clock::now();
        std::vector<BlockCode> codes;
        for (std::uint64_t off = 0; off < n; off += cfg.block_size) {
          const std::uint64_t len = std::min<std::uint64_t>(cfg.block_size, n - off);
          codes.push_back(encode_block(std::span(prepared.bits).subspan(off, len), table));
        }
        std::vector<std::uint8_t> qi_out;
        qi_out.reserve(n);
        for (const BlockCode& code : codes) {
          const auto block = decode_block(code, table);
          qi_out.insert(qi_out.end(), block.begin(), block.end());
        }
        row.qi_seconds += detail::seconds_since(start);
        if (qi_out != prepared.bits) fail(ErrorCode::corrupt_stream, "QI block round trip failed");

        start = detail::Clock::now();
        const std::vector<std::uint8_t> payload = ac::ac_encode(raw, ones);
        const std::vector<std::uint8_t> ac_out = ac::ac_decode(payload, n, ones);
        row.ac_seconds += detail::seconds_since(start);
        if (ac_out != raw) fail(ErrorCode::corrupt_stream, "range coder round trip failed");

        row.ones += static_cast<double>(ones);
        row.qi_payload_bits += static_cast<double>(stream.layout.payload_bits());
        row.qi_count_bits += static_cast<double>(stream.layout.count_bits);
        row.ac_payload_bits += 8.0 * static_cast<double>(payload.size());
      }
      const double t = cfg.trials ? cfg.trials : 1;
      row.ones /= t;
      row.qi_payload_bits /= t;
      row.qi_count_bits /= t;
      row.ac_payload_bits /= t;
      row.size_delta_pct = row.qi_payload_bits > 0 ? (row.ac_payload_bits / row.qi_payload_bits - 1.0) * 100.0 : 0.0;
      row.speed_ratio = row.qi_seconds > 0 ? row.ac_seconds / row.qi_seconds : 0.0;
      report.rows.push_back(row);
    }
  }
  return report;
}

/// Aligned text: one line per density, a (size delta %, speed ratio) pair per
/// input size.
inline void print_table(std::ostream& os, const BenchReport& r) {
  std::vector<std::uint64_t> sizes;
  for (const Row& row : r.rows)
    if (std::find(sizes.begin(), sizes.end(), row.n) == sizes.end()) sizes.push_back(row.n);
  os << "QI (g=" << r.g << ", block " << r.block_size << ") vs static range coder, " << r.trials
     << " inputs per cell, seed " << r.seed << "\n";
  os << std::left << std::setw(8) << "#1's";
  for (const auto n : sizes) {
    std::ostringstream head;
    head << "N: " << n / 1024 << "K";
    os << std::right << std::setw(11) << head.str() << std::setw(9) << "Speed";
  }
  os << "\n";
  std::string current;
  for (const Row& row : r.rows) {
    if (row.label != current) {
      if (!current.empty()) os << "\n";
      current = row.label;
      os << std::left << std::setw(8) << row.label;
    }
    os << std::right << std::fixed << std::setprecision(3) << std::setw(11) << row.size_delta_pct << std::setprecision(1)
       << std::setw(8) << row.speed_ratio << "x";
  }
  os << "\n(N: output size % (AC/QI - 1)*100 over index payload bits; Speed: AC/QI coding time ratio.\n"
        " Vary: int32 ramp data, an assumed reconstruction of the original data set.)\n";
}

/// CSV: header row, then one row per (N, density). Timing columns vary from
/// run to run, so they are opt-in.
inline void write_csv(std::ostream& os, const BenchReport& r, bool with_times) {
  os << "n,density,ones,qi_payload_bits,qi_count_bits,ac_payload_bits,size_delta_pct";
  if (with_times) os << ",qi_seconds,ac_seconds,speed_ratio";
  os << "\n";
  for (const Row& row : r.rows) {
    os << row.n << "," << row.label << "," << std::fixed << std::setprecision(3) << row.ones << "," << row.qi_payload_bits
       << "," << row.qi_count_bits << "," << row.ac_payload_bits << "," << std::setprecision(6) << row.size_delta_pct;
    if (with_times) os << "," << std::setprecision(6) << row.qi_seconds << "," << row.ac_seconds << "," << row.speed_ratio;
    os << "\n";
  }
}

}  // namespace qi::bench
