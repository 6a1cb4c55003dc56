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

#include "ctlmon/bitvec.hpp"

#include "ctlmon/errors.hpp"

namespace ctlmon {

BitVec::BitVec(unsigned width, u128 value) : width_(width), value_(0) {
  if (width == 0 || width > kMaxBitWidth) {
    throw ConfigError("bit width must be in 1..128, got " + std::to_string(width));
  }
  value_ = value & width_mask(width);
}

BitVec BitVec::flipped(unsigned index) const {
  if (index >= width_) {
    throw ConfigError("bit index " + std::to_string(index) + " out of range for width " +
                      std::to_string(width_));
  }
  return BitVec(width_, value_ ^ (u128{1} << index), Raw{});
}

std::string u128_to_hex(u128 v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  if (v == 0) return "0";
  std::string out;
  while (v != 0) {
    out.insert(out.begin(), kDigits[static_cast<unsigned>(v & 0xf)]);
    v >>= 4;
  }
  return out;
}

u128 u128_from_hex(std::string_view hex) {
  if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X')) hex.remove_prefix(2);
  if (hex.empty()) throw ConfigError("empty hex value");
  u128 v = 0;
  int significant = 0;
  for (char c : hex) {
    unsigned d;
    if (c >= '0' && c <= '9') {
      d = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      d = static_cast<unsigned>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      d = static_cast<unsigned>(c - 'A' + 10);
    } else {
      throw ConfigError("bad hex digit '" + std::string(1, c) + "' in '" + std::string(hex) + "'");
    }
    if (significant > 0 || d != 0) ++significant;
    if (significant > 32) throw ConfigError("hex value wider than 128 bits: " + std::string(hex));
    v = (v << 4) | d;
  }
  return v;
}

std::string BitVec::to_hex() const { return u128_to_hex(value_); }

BitVec BitVec::from_hex(unsigned width, std::string_view hex) {
  const u128 v = u128_from_hex(hex);
  if ((v & ~width_mask(width)) != 0) {
    throw ConfigError("value 0x" + std::string(hex) + " does not fit in " + std::to_string(width) +
                      " bits");
  }
  return BitVec(width, v);
}

}  // namespace ctlmon
