#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qi {

enum class ErrorCode {
  invalid_argument,
  out_of_range,
  capacity,
  block_too_long,
  corrupt_index,
  digit_out_of_range,
  rank_out_of_range,
  degenerate_alphabet,
  symbol_out_of_alphabet,
  inconsistent_parameters,
  bad_magic,
  bad_version,
  truncated_stream,
  corrupt_stream,
};

constexpr std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::out_of_range: return "out-of-range";
    case ErrorCode::capacity: return "capacity";
    case ErrorCode::block_too_long: return "block-too-long";
    case ErrorCode::corrupt_index: return "corrupt-index";
    case ErrorCode::digit_out_of_range: return "digit-out-of-range";
    case ErrorCode::rank_out_of_range: return "rank-out-of-range";
    case ErrorCode::degenerate_alphabet: return "degenerate-alphabet";
    case ErrorCode::symbol_out_of_alphabet: return "symbol-out-of-alphabet";
    case ErrorCode::inconsistent_parameters: return "inconsistent-parameters";
    case ErrorCode::bad_magic: return "bad-magic";
    case ErrorCode::bad_version: return "bad-version";
    case ErrorCode::truncated_stream: return "truncated-stream";
    case ErrorCode::corrupt_stream: return "corrupt-stream";
  }
  return "unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace qi
