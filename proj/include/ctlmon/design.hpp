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

// Synchronous cycle-level design contract.
//
// A design owns its signal table (one BitVec slot per declared signal) and
// its test environment (stimulus source and output sink). Every step()
// advances exactly one clock edge:
//
//   1. the environment drives the primary inputs from the pre-edge outputs
//      (forced inputs override the driven value),
//   2. registers take their next value,
//   3. wires and outputs are recomputed from the new register values.
//
// Reads after step() therefore return post-edge values.

#ifndef CTLMON_DESIGN_HPP_
#define CTLMON_DESIGN_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ctlmon/bitvec.hpp"

namespace ctlmon {

enum class SignalKind { kPrimaryInput, kPrimaryOutput, kSubmoduleOutput, kRegister, kWire };
enum class SignalClass { kControl, kData };

std::string_view to_string(SignalKind kind);
std::string_view to_string(SignalClass cls);

using SignalId = std::uint32_t;

struct SignalInfo {
  std::string path;
  unsigned width = 1;
  SignalKind kind = SignalKind::kWire;
  SignalClass cls = SignalClass::kControl;
  friend bool operator==(const SignalInfo&, const SignalInfo&) = default;
};

enum class DesignId { kConv, kGaus, kAes, kRouter };

std::string_view to_string(DesignId id);
// Throws ConfigError for unknown names.
DesignId parse_design_id(std::string_view name);

// Flat, design-specific output record compared against the functional
// oracle. Words are opaque to everything but the design that produced them.
struct OutputRecord {
  std::vector<std::int64_t> words;
  friend bool operator==(const OutputRecord&, const OutputRecord&) = default;
};

class Design {
 public:
  virtual ~Design() = default;

  virtual DesignId id() const = 0;
  // Restores every register and the environment to the power-on state and
  // releases all forced inputs.
  virtual void reset() = 0;
  virtual void step() = 0;
  // True once the environment has observed the end of processing.
  virtual bool done() const = 0;
  virtual OutputRecord outputs() const = 0;

  const std::vector<SignalInfo>& signals() const { return info_; }
  std::optional<SignalId> find(std::string_view path) const;
  // Throws ConfigError naming the path if it is not declared.
  SignalId require(std::string_view path) const;

  const BitVec& read(SignalId id) const { return values_[id]; }
  std::span<const BitVec> values() const { return values_; }

  // XOR of one register bit. The new value is visible immediately, and
  // combinational signals are recomputed. Throws ConfigError for a
  // non-register signal or an out-of-range bit.
  void flip_register_bit(SignalId id, unsigned bit);
  // While active, the environment's drive of this primary input is replaced
  // by `value`. Throws ConfigError for non-input signals.
  void force_input(SignalId id, const BitVec& value, bool active);
  void release_all_forces();

  const std::vector<SignalId>& control_registers() const { return control_registers_; }
  const std::vector<SignalId>& primary_control_inputs() const { return primary_control_inputs_; }
  // Control signals at hierarchy level 1 (primary outputs) and level 2
  // (submodule outputs), in declaration order.
  const std::vector<SignalId>& level_signals(int level) const;

  unsigned control_register_bits() const;

 protected:
  SignalId add_signal(std::string path, unsigned width, SignalKind kind, SignalClass cls);
  // Convenience: registers flagged here become Case-1 targets and Level-3
  // monitor candidates.
  SignalId add_control_register(std::string path, unsigned width);
  SignalId add_primary_control_input(std::string path, unsigned width);

  std::uint64_t get(SignalId id) const { return values_[id].low64(); }
  void set(SignalId id, std::uint64_t v) { values_[id] = values_[id].with_value(v); }
  void set_wide(SignalId id, u128 v) { values_[id] = values_[id].with_value(v); }
  // Environment write to a primary input; honours an active force.
  void drive(SignalId id, u128 v);
  void clear_all_values();

  // Recomputes wires and outputs from the current register values.
  virtual void update_outputs() = 0;

 private:
  std::vector<SignalInfo> info_;
  std::vector<BitVec> values_;
  std::unordered_map<std::string, SignalId> by_path_;
  std::vector<SignalId> control_registers_;
  std::vector<SignalId> primary_control_inputs_;
  std::vector<SignalId> level1_;
  std::vector<SignalId> level2_;
  std::vector<std::optional<BitVec>> forces_;
};

}  // namespace ctlmon

#endif  // CTLMON_DESIGN_HPP_
