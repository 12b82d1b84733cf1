#pragma once

// Bit packing used by the stream and table formats. Bits are packed
// least-significant first within each byte; multi-byte integers are
// little-endian.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "qi/error.hpp"

namespace qi {

class BitWriter {
 public:
  void write(std::uint64_t value, unsigned nbits) {
    for (unsigned done = 0; done < nbits;) {
      if (used_ == 0) bytes_.push_back(0);
      const unsigned take = std::min(8u - used_, nbits - done);
      const auto chunk = static_cast<std::uint8_t>((value >> done) & ((1u << take) - 1));
      bytes_.back() |= static_cast<std::uint8_t>(chunk << used_);
      used_ = (used_ + take) & 7u;
      done += take;
    }
    bit_count_ += nbits;
  }

  void write_bit(bool bit) { write(bit ? 1 : 0, 1); }

  std::uint64_t bit_count() const noexcept { return bit_count_; }
  std::vector<std::uint8_t>&& take() && { return std::move(bytes_); }
  const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
  unsigned used_ = 0;
  std::uint64_t bit_count_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint64_t read(unsigned nbits) {
    if (nbits > remaining()) fail(ErrorCode::truncated_stream, "bit field runs past the end of the stream");
    std::uint64_t value = 0;
    for (unsigned done = 0; done < nbits;) {
      const std::size_t byte = pos_ >> 3;
      const unsigned offset = pos_ & 7u;
      const unsigned take = std::min(8u - offset, nbits - done);
      const std::uint64_t chunk = (bytes_[byte] >> offset) & ((1u << take) - 1);
      value |= chunk << done;
      done += take;
      pos_ += take;
    }
    return value;
  }

  bool read_bit() { return read(1) != 0; }

  std::uint64_t position() const noexcept { return pos_; }
  std::uint64_t remaining() const noexcept { return bytes_.size() * 8 - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::uint64_t pos_ = 0;
};

namespace le {

inline void put(std::vector<std::uint8_t>& out, std::uint64_t value, unsigned nbytes) {
  for (unsigned i = 0; i < nbytes; ++i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

inline std::uint64_t get(std::span<const std::uint8_t> in, std::size_t offset, unsigned nbytes) {
  if (offset + nbytes > in.size()) fail(ErrorCode::truncated_stream, "field runs past the end of the input");
  std::uint64_t value = 0;
  for (unsigned i = 0; i < nbytes; ++i) value |= std::uint64_t{in[offset + i]} << (8 * i);
  return value;
}

}  // namespace le

/// Bits needed to write any value in [0, count): ceil(log2(count)).
constexpr unsigned bits_for_count(std::uint64_t count) noexcept {
  return count <= 1 ? 0 : static_cast<unsigned>(std::bit_width(count - 1));
}

}  // namespace qi
