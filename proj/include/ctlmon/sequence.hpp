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

// Normal-state-sequence checking.
//
// A state key is the concatenation of selected signal bits in one cycle.
// Learning records every consecutive (previous, current) key pair seen in a
// fault-free trace, starting from a sentinel "no previous state", plus the
// last key. Detection flags the first pair that is not in the table and,
// optionally, a run whose last key differs from the learned end state.

#ifndef CTLMON_SEQUENCE_HPP_
#define CTLMON_SEQUENCE_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "ctlmon/bitvec.hpp"
#include "ctlmon/detector.hpp"
#include "ctlmon/sim.hpp"

namespace ctlmon {

// Bit selection types.
enum class BitType : int {
  kAllBits = 1,
  kMsb = 2,
  kUsedMsb = 3,  // top bit of the range the signal actually uses
  kLsb = 4,
};

struct BitSelectEntry {
  std::string signal;
  unsigned bit = 0;
  friend bool operator==(const BitSelectEntry&, const BitSelectEntry&) = default;
};

// Ordered bit list; the first entry becomes the key's most significant bit.
struct BitSelector {
  std::vector<BitSelectEntry> entries;
  int level = 0;  // 1 primary outputs, 2 submodule outputs, 3 control registers
  BitType bit_type = BitType::kAllBits;

  unsigned width() const { return static_cast<unsigned>(entries.size()); }
  // "L3(1)" style label.
  std::string label() const;
  friend bool operator==(const BitSelector&, const BitSelector&) = default;
};

struct BitRange {
  unsigned lo = 0;
  unsigned hi = 0;  // inclusive
};

// Builds the selector for `level` over the design's control signals at that
// level. Throws ConfigError for bit type 3 without used ranges, for a key
// wider than 128 bits, or for a level without signals.
BitSelector select_bits(const Design& design, int level, BitType bit_type,
                        const std::map<std::string, BitRange>* used_ranges = nullptr);

// Used bit range per watched signal: [0, index of the highest bit that is
// ever set]. Signals that stay zero get [0, 0].
std::map<std::string, BitRange> used_ranges_from_trace(const Trace& trace);

struct KeyPair {
  bool has_prev = false;  // false: the sentinel "no previous state"
  u128 prev = 0;
  u128 next = 0;
  friend bool operator==(const KeyPair&, const KeyPair&) = default;
  friend auto operator<=>(const KeyPair&, const KeyPair&) = default;
};

struct KeyPairHash {
  std::size_t operator()(const KeyPair& k) const noexcept;
};

struct SequenceTable {
  BitSelector selector;
  unsigned key_width = 0;
  std::unordered_set<KeyPair, KeyPairHash> pairs;
  std::optional<u128> end_state;

  bool contains(const KeyPair& k) const { return pairs.contains(k); }
  // Pairs in canonical order: sentinel pair first, then by (prev, next).
  std::vector<KeyPair> sorted_pairs() const;
  friend bool operator==(const SequenceTable& a, const SequenceTable& b) {
    return a.selector == b.selector && a.key_width == b.key_width && a.pairs == b.pairs &&
           a.end_state == b.end_state;
  }
};

// Key of every row of `trace` under `sel`. Throws ConfigError when the
// trace does not watch a selected signal.
std::vector<u128> keys_from_trace(const Trace& trace, const BitSelector& sel);

// Learns the table from raw keys (the trace-free core of learning).
SequenceTable learn_from_keys(const std::vector<u128>& keys, const BitSelector& sel);
SequenceTable acq_normal_seq(const Trace& golden, const BitSelector& sel);

struct SeqDetection {
  bool fault = false;
  std::optional<std::uint64_t> fault_cycle;  // absent for an end-state-only fault
  bool via_final = false;
  friend bool operator==(const SeqDetection&, const SeqDetection&) = default;
};

// Offline replay. `cycles[i]` is the cycle of keys[i].
SeqDetection detect_keys(const std::vector<u128>& keys, const std::vector<std::uint64_t>& cycles,
                         const SequenceTable& table, bool check_end);
// Throws ConfigError if the selector and table widths differ.
SeqDetection detect(const Trace& trace, const BitSelector& sel, const SequenceTable& table,
                    bool check_end);

struct SeqMonitorState {
  KeyPair window;  // window.next is the last key once has_last is set
  bool has_last = false;
  bool fault = false;
  std::optional<std::uint64_t> fault_cycle;
  bool via_final = false;
};

// Online checker with the same semantics as detect().
class SequenceDetector final : public Detector {
 public:
  SequenceDetector(std::string name, std::shared_ptr<const SequenceTable> table, bool check_end);

  const std::string& name() const override { return name_; }
  DetectorKind kind() const override { return DetectorKind::kSequence; }
  void on_reset(const Design& design) override;
  void on_cycle(const Design& design, std::uint64_t cycle) override;
  void finalize(std::uint64_t end_cycle) override;
  DetectionRecord record() const override;

  const SequenceTable& table() const { return *table_; }
  bool check_end() const { return check_end_; }
  const SeqMonitorState& state() const { return state_; }

 private:
  std::string name_;
  std::shared_ptr<const SequenceTable> table_;
  bool check_end_;
  std::vector<std::uint32_t> ids_;
  std::vector<unsigned> bits_;
  const Design* bound_ = nullptr;
  SeqMonitorState state_;
  std::uint64_t end_cycle_ = 0;
};

// Text format:
//
//   seqtable v1
//   selector level=<n> type=<n>
//   entry <signal> <bit>        (one per key bit, MSB first)
//   width <n>
//   end_state <hex>|-
//   pairs <count>
//   <prev_hex|->,<next_hex>     (one per pair)
//
// Throws ConfigError with a line number.
SequenceTable parse_table(std::string_view text);
std::string serialize_table(const SequenceTable& table);

}  // namespace ctlmon

#endif  // CTLMON_SEQUENCE_HPP_
