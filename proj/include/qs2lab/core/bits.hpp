#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

#include "qs2lab/core/error.hpp"

namespace qs2lab {

// Bitstrings are carried as the low `width` bits of a word. The textual form is
// big-endian: the first character is the most significant bit.
using Word = std::uint64_t;

inline constexpr unsigned kMaxWordBits = 62;

constexpr Word low_mask(unsigned width) {
  return width >= 64 ? ~Word{0} : (Word{1} << width) - 1;
}

constexpr Word dimension_of(unsigned width) { return Word{1} << width; }

constexpr int parity(Word x) { return std::popcount(x) & 1; }

inline Word parse_bits(std::string_view text, unsigned expected_width) {
  if (text.size() != expected_width) {
    fail(Errc::WidthMismatch, "bitstring '" + std::string(text) + "' has width " +
                                  std::to_string(text.size()) + ", expected " +
                                  std::to_string(expected_width));
  }
  Word value = 0;
  for (char ch : text) {
    if (ch != '0' && ch != '1') {
      fail(Errc::InvalidArgument, "bitstring '" + std::string(text) + "' contains non-binary digit");
    }
    value = (value << 1) | static_cast<Word>(ch == '1');
  }
  return value;
}

inline std::string format_bits(Word value, unsigned width) {
  std::string out(width, '0');
  for (unsigned i = 0; i < width; ++i) {
    if ((value >> (width - 1 - i)) & 1U) out[i] = '1';
  }
  return out;
}

// Concatenate hi || lo where lo has `lo_width` bits.
constexpr Word concat(Word hi, Word lo, unsigned lo_width) {
  return (hi << lo_width) | (lo & low_mask(lo_width));
}

}  // namespace qs2lab
