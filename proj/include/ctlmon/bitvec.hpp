// Copyright 2026 The ctlmon Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CTLMON_BITVEC_HPP_
#define CTLMON_BITVEC_HPP_

#include <cstdint>
#include <string>
#include <string_view>

namespace ctlmon {

using u128 = unsigned __int128;

inline constexpr unsigned kMaxBitWidth = 128;

constexpr u128 width_mask(unsigned width) {
  return width >= 128 ? ~u128{0} : ((u128{1} << width) - 1);
}

// Fixed-width unsigned value of 1..128 bits. The stored value is always
// masked to the width.
class BitVec {
 public:
  BitVec() : width_(1), value_(0) {}
  // Throws ConfigError for widths outside 1..128.
  BitVec(unsigned width, u128 value);

  unsigned width() const { return width_; }
  u128 value() const { return value_; }
  std::uint64_t low64() const { return static_cast<std::uint64_t>(value_); }
  bool bit(unsigned index) const {
    return index < width_ && ((value_ >> index) & 1) != 0;
  }

  // Same width, new value (masked).
  BitVec with_value(u128 value) const { return BitVec(width_, value, Raw{}); }
  BitVec flipped(unsigned index) const;

  // Lowercase hex without prefix, at least one digit ("0", "1f").
  std::string to_hex() const;
  // Accepts an optional 0x prefix. Throws ConfigError on bad digits or a
  // value that does not fit the width.
  static BitVec from_hex(unsigned width, std::string_view hex);

  friend bool operator==(const BitVec& a, const BitVec& b) {
    return a.width_ == b.width_ && a.value_ == b.value_;
  }

 private:
  struct Raw {};
  BitVec(unsigned width, u128 value, Raw)
      : width_(width), value_(value & width_mask(width)) {}

  unsigned width_;
  u128 value_;
};

// Hex of a raw 128-bit value, lowercase, no leading zeros.
std::string u128_to_hex(u128 v);
// Parses hex (optional 0x prefix) into a 128-bit value; throws ConfigError.
u128 u128_from_hex(std::string_view hex);

}  // namespace ctlmon

#endif  // CTLMON_BITVEC_HPP_
