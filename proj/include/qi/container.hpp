#pragma once

// QIX1 stream format.
//
//   header (19 bytes, little-endian)
//     magic "QIX1" | version u8 = 1 | g u8 | block_size u32 | total_symbols u64 | flags u8
//     flags: bit 0 = bits were inverted, bit 1 = byte-alphabet payload
//   bit-packed payload (LSB-first within bytes)
//     count fields   per block, symbol counts 1..a-1 (a = 2 or 256), each
//                    ceil(log2(block_len + 1)) bits; count 0 is implied
//     index bodies   per block code, bitlength(L(m-k, k)) - 16 bits (or none)
//     tip stream     mixed-radix number of all tip digits, ceil(log2 L_B) bits
//     zero padding to a byte boundary
//   CRC-32 of everything above (4 bytes), present when total_symbols > 0
//
// Every field length follows from the header and the count fields.

#include <boost/crc.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "qi/bits.hpp"
#include "qi/codec.hpp"
#include "qi/error.hpp"
#include "qi/multialpha.hpp"
#include "qi/qtable.hpp"
#include "qi/radix.hpp"

namespace qi {

inline constexpr std::uint8_t kStreamVersion = 1;
inline constexpr std::size_t kHeaderBytes = 19;
inline constexpr std::size_t kChecksumBytes = 4;
inline constexpr std::uint8_t kFlagInverted = 0x01;
inline constexpr std::uint8_t kFlagMultiAlphabet = 0x02;
inline constexpr std::uint32_t kByteAlphabet = 256;

struct StreamParams {
  std::uint32_t block_size = 4096;
  Precision g{32};
};

struct StreamHeader {
  std::uint8_t version = kStreamVersion;
  Precision g{32};
  std::uint32_t block_size = 4096;
  std::uint64_t total_symbols = 0;
  std::uint8_t flags = 0;

  std::uint32_t alphabet() const noexcept { return (flags & kFlagMultiAlphabet) ? kByteAlphabet : 2; }
  std::uint64_t block_count() const noexcept { return (total_symbols + block_size - 1) / block_size; }
  std::uint32_t block_length(std::uint64_t b) const noexcept {
    const std::uint64_t start = b * block_size;
    return static_cast<std::uint32_t>(std::min<std::uint64_t>(block_size, total_symbols - start));
  }
};

/// One block: its symbol counts and its block codes (one for binary blocks,
/// one per internal tree node for byte blocks).
struct BlockGroup {
  std::vector<std::uint64_t> counts;
  std::vector<BlockCode> codes;
};

struct StreamLayout {
  std::uint64_t count_bits = 0;
  std::uint64_t body_bits = 0;
  std::uint64_t tip_bits = 0;
  std::uint64_t total_bytes = 0;

  /// Index payload: bodies plus the tip stream.
  std::uint64_t payload_bits() const noexcept { return body_bits + tip_bits; }
};

struct EncodedStream {
  std::vector<std::uint8_t> bytes;
  StreamLayout layout;
};

struct DecodedStream {
  StreamHeader header;
  std::vector<std::uint8_t> symbols;  // 0/1 per bit, or bytes
};

/// Builds tables on demand; one table per precision, grown to the largest
/// block size requested so far.
class TableCache {
 public:
  explicit TableCache(std::uint64_t entry_budget = QuantTable::kDefaultEntryBudget) : budget_(entry_budget) {}

  void adopt(std::shared_ptr<const QuantTable> table) { tables_[table->precision().bits()] = std::move(table); }

  const QuantTable& get(Precision g, std::uint32_t n_max) {
    auto& slot = tables_[g.bits()];
    if (!slot || slot->n_max() < n_max) slot = std::make_shared<const QuantTable>(build_table(n_max, g, budget_));
    return *slot;
  }

 private:
  std::uint64_t budget_;
  std::map<unsigned, std::shared_ptr<const QuantTable>> tables_;
};

struct PreparedBits {
  std::vector<std::uint8_t> bits;
  bool inverted = false;
};

/// Inverts the input when ones outnumber zeros, so 0 is the more frequent bit.
inline PreparedBits prepare_bits(std::span<const std::uint8_t> raw) {
  std::uint64_t ones = 0;
  for (const std::uint8_t b : raw) ones += b ? 1 : 0;
  PreparedBits out;
  out.inverted = ones > raw.size() - ones;
  out.bits.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out.bits[i] = static_cast<std::uint8_t>((raw[i] ? 1 : 0) ^ (out.inverted ? 1 : 0));
  return out;
}

namespace detail {

inline std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

inline unsigned count_field_bits(std::uint32_t block_len) { return bits_for_count(std::uint64_t{block_len} + 1); }

/// ceil(log2(value(q))) for q > 0.
inline std::uint64_t ceil_log2(SWInt q) {
  const std::uint64_t bl = q.bit_length();
  return std::has_single_bit(q.w) ? bl - 1 : bl;
}

/// Block classes (m, k) of a group, in code order.
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> group_classes(std::span<const std::uint64_t> counts,
                                                                          std::uint32_t length) {
  if (counts.size() == 2) return {{length, static_cast<std::uint32_t>(counts[1])}};
  const CodeTree tree = build_tree(counts);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> classes;
  for (const std::int32_t id : tree.internal_preorder()) classes.push_back(node_class(tree, id));
  return classes;
}

inline void write_header(std::vector<std::uint8_t>& out, const StreamHeader& h) {
  out.insert(out.end(), {'Q', 'I', 'X', '1'});
  le::put(out, h.version, 1);
  le::put(out, h.g.bits(), 1);
  le::put(out, h.block_size, 4);
  le::put(out, h.total_symbols, 8);
  le::put(out, h.flags, 1);
}

inline void write_accumulator_bits(BitWriter& w, const BitAccumulator& value, std::uint64_t nbits) {
  for (std::uint64_t off = 0; off < nbits; off += 64) {
    const auto n = static_cast<unsigned>(std::min<std::uint64_t>(64, nbits - off));
    w.write(value.extract(off, n), n);
  }
}

inline BitAccumulator read_accumulator_bits(BitReader& r, std::uint64_t nbits) {
  BitAccumulator value;
  for (std::uint64_t off = 0; off < nbits; off += 64) {
    const auto n = static_cast<unsigned>(std::min<std::uint64_t>(64, nbits - off));
    value.or_bits(r.read(n), off, n);
  }
  return value;
}

}  // namespace detail

/// Serializes already-coded blocks. Group b must cover block b of the header.
inline EncodedStream write_stream(const StreamHeader& header, std::span<const BlockGroup> groups, const QuantTable& t) {
  if (t.precision() != header.g || header.block_size == 0 || header.block_size > t.n_max())
    fail(ErrorCode::inconsistent_parameters, "table does not match stream precision and block size");
  if (groups.size() != header.block_count()) fail(ErrorCode::inconsistent_parameters, "block count mismatch");
  const std::uint32_t alphabet = header.alphabet();

  EncodedStream out;
  detail::write_header(out.bytes, header);
  if (header.total_symbols == 0) {
    out.layout.total_bytes = out.bytes.size();
    return out;
  }

  BitWriter bits;
  std::vector<TipSplit> tips;
  std::vector<std::uint32_t> radices;
  for (std::size_t b = 0; b < groups.size(); ++b) {
    const BlockGroup& g = groups[b];
    const std::uint32_t len = header.block_length(b);
    std::uint64_t sum = 0;
    for (const std::uint64_t c : g.counts) sum += c;
    if (g.counts.size() != alphabet || sum != len) fail(ErrorCode::inconsistent_parameters, "block counts do not cover the block");
    const auto classes = detail::group_classes(g.counts, len);
    if (classes.size() != g.codes.size()) fail(ErrorCode::inconsistent_parameters, "wrong number of block codes");
    for (std::size_t i = 0; i < classes.size(); ++i) {
      if (classes[i] != std::pair{g.codes[i].m, g.codes[i].k})
        fail(ErrorCode::inconsistent_parameters, "block code class does not match the counts");
    }
    const unsigned width = detail::count_field_bits(len);
    for (std::uint32_t sym = 1; sym < alphabet; ++sym) bits.write(g.counts[sym], width);
  }
  out.layout.count_bits = bits.bit_count();

  for (const BlockGroup& g : groups) {
    for (const BlockCode& code : g.codes) {
      TipSplit tip = split_tip(code, t);
      detail::write_accumulator_bits(bits, tip.body, tip.body_bits);
      out.layout.body_bits += tip.body_bits;
      radices.push_back(tip.radix);
      tips.push_back(std::move(tip));
    }
  }

  const RadixTable tip_table(radices, header.g);
  std::vector<std::uint32_t> digits(tips.size());
  for (std::size_t i = 0; i < tips.size(); ++i) digits[i] = tips[i].digit;
  const BitAccumulator tip_index = radix_encode(digits, tip_table);
  out.layout.tip_bits = detail::ceil_log2(tip_table.total());
  detail::write_accumulator_bits(bits, tip_index, out.layout.tip_bits);

  const auto payload = std::move(bits).take();
  out.bytes.insert(out.bytes.end(), payload.begin(), payload.end());
  le::put(out.bytes, detail::crc32(out.bytes), 4);
  out.layout.total_bytes = out.bytes.size();
  return out;
}

inline EncodedStream encode_bits(std::span<const std::uint8_t> raw, const StreamParams& params, const QuantTable& t) {
  if (params.block_size == 0 || params.block_size > t.n_max() || t.precision() != params.g)
    fail(ErrorCode::inconsistent_parameters, "table does not match stream precision and block size");
  const PreparedBits prepared = prepare_bits(raw);
  StreamHeader header;
  header.g = params.g;
  header.block_size = params.block_size;
  header.total_symbols = raw.size();
  header.flags = prepared.inverted ? kFlagInverted : 0;

  std::vector<BlockGroup> groups(header.block_count());
  for (std::uint64_t b = 0; b < groups.size(); ++b) {
    const std::span<const std::uint8_t> block(prepared.bits.data() + b * params.block_size, header.block_length(b));
    BlockCode code = encode_block(block, t);
    groups[b].counts = {code.m - code.k, code.k};
    groups[b].codes.push_back(std::move(code));
  }
  return write_stream(header, groups, t);
}

inline EncodedStream encode_bytes(std::span<const std::uint8_t> data, const StreamParams& params, const QuantTable& t) {
  if (params.block_size == 0 || params.block_size > t.n_max() || t.precision() != params.g)
    fail(ErrorCode::inconsistent_parameters, "table does not match stream precision and block size");
  StreamHeader header;
  header.g = params.g;
  header.block_size = params.block_size;
  header.total_symbols = data.size();
  header.flags = kFlagMultiAlphabet;

  std::vector<BlockGroup> groups(header.block_count());
  for (std::uint64_t b = 0; b < groups.size(); ++b) {
    const std::span<const std::uint8_t> block(data.data() + b * params.block_size, header.block_length(b));
    groups[b].counts = symbol_counts(block, kByteAlphabet);
    groups[b].codes = encode_multi(block, build_tree(groups[b].counts), t);
  }
  return write_stream(header, groups, t);
}

inline StreamHeader read_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) fail(ErrorCode::truncated_stream, "stream shorter than its magic");
  if (bytes[0] != 'Q' || bytes[1] != 'I' || bytes[2] != 'X' || bytes[3] != '1') fail(ErrorCode::bad_magic, "not a QIX1 stream");
  if (bytes.size() < kHeaderBytes) fail(ErrorCode::truncated_stream, "stream shorter than its header");
  if (bytes[4] != kStreamVersion) fail(ErrorCode::bad_version, "unsupported stream version");
  const auto gbits = static_cast<unsigned>(bytes[5]);
  if (gbits < Precision::kMin || gbits > Precision::kMax) fail(ErrorCode::corrupt_stream, "precision out of range");
  StreamHeader h;
  h.version = bytes[4];
  h.g = Precision(gbits);
  h.block_size = static_cast<std::uint32_t>(le::get(bytes, 6, 4));
  h.total_symbols = le::get(bytes, 10, 8);
  h.flags = bytes[18];
  if (h.block_size == 0) fail(ErrorCode::corrupt_stream, "zero block size");
  if (h.flags & ~(kFlagInverted | kFlagMultiAlphabet)) fail(ErrorCode::corrupt_stream, "reserved flag bits set");
  if ((h.flags & kFlagInverted) && (h.flags & kFlagMultiAlphabet)) fail(ErrorCode::corrupt_stream, "inversion flag on a byte stream");
  return h;
}

/// Parses and decodes a stream, returning the original bits or bytes.
inline DecodedStream read_stream(std::span<const std::uint8_t> bytes, TableCache& tables) {
  DecodedStream out;
  out.header = read_header(bytes);
  const StreamHeader& h = out.header;
  if (h.total_symbols == 0) {
    if (bytes.size() != kHeaderBytes) fail(ErrorCode::corrupt_stream, "trailing bytes after an empty stream");
    return out;
  }
  if (bytes.size() < kHeaderBytes + kChecksumBytes) fail(ErrorCode::truncated_stream, "missing payload");
  const std::uint32_t alphabet = h.alphabet();
  const std::uint64_t blocks = h.block_count();
  // Every block has at least one count bit per field.
  if (blocks > (bytes.size() - kHeaderBytes) * 8) fail(ErrorCode::truncated_stream, "stream too short for its block count");

  // Count fields come first and need no table; they bound the stream length
  // before any table is built.
  BitReader reader(bytes.subspan(kHeaderBytes));
  std::vector<std::vector<std::uint64_t>> counts(blocks);
  for (std::uint64_t b = 0; b < blocks; ++b) {
    const std::uint32_t len = h.block_length(b);
    const unsigned width = detail::count_field_bits(len);
    counts[b].assign(alphabet, 0);
    std::uint64_t sum = 0;
    for (std::uint32_t sym = 1; sym < alphabet; ++sym) {
      counts[b][sym] = reader.read(width);
      sum += counts[b][sym];
    }
    if (sum > len) fail(ErrorCode::corrupt_stream, "block counts exceed the block length");
    counts[b][0] = len - sum;
  }

  const QuantTable& t = tables.get(h.g, static_cast<std::uint32_t>(std::min<std::uint64_t>(h.block_size, h.total_symbols)));
  std::vector<std::pair<std::uint32_t, std::uint32_t>> classes;
  std::vector<std::size_t> group_end;
  std::uint64_t body_bits = 0;
  std::vector<std::uint32_t> radices;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    for (const auto& [m, k] : detail::group_classes(counts[b], h.block_length(b))) {
      classes.emplace_back(m, k);
      body_bits += tip_body_bits(m, k, t);
      radices.push_back(tip_radix(m, k, t));
    }
    group_end.push_back(classes.size());
  }
  const RadixTable tip_table(radices, h.g);
  const std::uint64_t tip_bits = detail::ceil_log2(tip_table.total());
  const std::uint64_t payload_bits = reader.position() + body_bits + tip_bits;
  const std::uint64_t expected = kHeaderBytes + (payload_bits + 7) / 8 + kChecksumBytes;
  if (bytes.size() < expected) fail(ErrorCode::truncated_stream, "stream shorter than its fields");
  if (bytes.size() > expected) fail(ErrorCode::corrupt_stream, "trailing bytes after the stream");
  const std::size_t crc_at = bytes.size() - kChecksumBytes;
  if (le::get(bytes, crc_at, 4) != detail::crc32(bytes.first(crc_at))) fail(ErrorCode::corrupt_stream, "checksum mismatch");

  std::vector<BitAccumulator> bodies;
  bodies.reserve(classes.size());
  for (const auto& [m, k] : classes) bodies.push_back(detail::read_accumulator_bits(reader, tip_body_bits(m, k, t)));
  const BitAccumulator tip_index = detail::read_accumulator_bits(reader, tip_bits);
  while (reader.position() < payload_bits + (8 - payload_bits % 8) % 8) {
    if (reader.read_bit()) fail(ErrorCode::corrupt_stream, "non-zero padding");
  }
  const std::vector<std::uint32_t> digits = radix_decode(tip_index, tip_table);

  out.symbols.reserve(h.total_symbols);
  std::size_t c = 0;
  try {
    for (std::uint64_t b = 0; b < blocks; ++b) {
      std::vector<BlockCode> codes;
      for (; c < group_end[b]; ++c) {
        const auto [m, k] = classes[c];
        codes.push_back(merge_tip(digits[c], radices[c], bodies[c], m, k, t));
      }
      const std::vector<std::uint8_t> block =
          alphabet == 2 ? decode_block(codes.front(), t) : decode_multi(codes, counts[b], t);
      out.symbols.insert(out.symbols.end(), block.begin(), block.end());
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::corrupt_stream) throw;
    fail(ErrorCode::corrupt_stream, e.what());
  }
  if (h.flags & kFlagInverted) {
    for (auto& bit : out.symbols) bit ^= 1;
  }
  return out;
}

inline DecodedStream read_stream(std::span<const std::uint8_t> bytes) {
  TableCache tables;
  return read_stream(bytes, tables);
}

}  // namespace qi
