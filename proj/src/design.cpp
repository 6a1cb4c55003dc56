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

#include "ctlmon/design.hpp"

#include "ctlmon/errors.hpp"

namespace ctlmon {

std::string_view to_string(SignalKind kind) {
  switch (kind) {
    case SignalKind::kPrimaryInput: return "primary-input";
    case SignalKind::kPrimaryOutput: return "primary-output";
    case SignalKind::kSubmoduleOutput: return "submodule-output";
    case SignalKind::kRegister: return "register";
    case SignalKind::kWire: return "wire";
  }
  return "?";
}

std::string_view to_string(SignalClass cls) {
  return cls == SignalClass::kControl ? "control" : "data";
}

std::string_view to_string(DesignId id) {
  switch (id) {
    case DesignId::kConv: return "conv";
    case DesignId::kGaus: return "gaus";
    case DesignId::kAes: return "aes";
    case DesignId::kRouter: return "router";
  }
  return "?";
}

DesignId parse_design_id(std::string_view name) {
  if (name == "conv") return DesignId::kConv;
  if (name == "gaus") return DesignId::kGaus;
  if (name == "aes") return DesignId::kAes;
  if (name == "router") return DesignId::kRouter;
  throw ConfigError("unknown design '" + std::string(name) + "' (expected conv, gaus, aes, router)");
}

std::optional<SignalId> Design::find(std::string_view path) const {
  auto it = by_path_.find(std::string(path));
  if (it == by_path_.end()) return std::nullopt;
  return it->second;
}

SignalId Design::require(std::string_view path) const {
  if (auto id = find(path)) return *id;
  throw ConfigError("unknown signal '" + std::string(path) + "' in design " +
                    std::string(to_string(id())));
}

void Design::flip_register_bit(SignalId id, unsigned bit) {
  if (id >= info_.size() || info_[id].kind != SignalKind::kRegister) {
    throw ConfigError("flip target is not a register");
  }
  if (bit >= info_[id].width) {
    throw ConfigError("bit " + std::to_string(bit) + " out of range for register " + info_[id].path);
  }
  values_[id] = values_[id].flipped(bit);
  update_outputs();
}

void Design::force_input(SignalId id, const BitVec& value, bool active) {
  if (id >= info_.size() || info_[id].kind != SignalKind::kPrimaryInput) {
    throw ConfigError("force target is not a primary input");
  }
  if (!active) {
    forces_[id].reset();
    return;
  }
  forces_[id] = values_[id].with_value(value.value());
}

void Design::release_all_forces() {
  for (auto& f : forces_) f.reset();
}

const std::vector<SignalId>& Design::level_signals(int level) const {
  static const std::vector<SignalId> kEmpty;
  switch (level) {
    case 1: return level1_;
    case 2: return level2_;
    case 3: return control_registers_;
    default: return kEmpty;
  }
}

unsigned Design::control_register_bits() const {
  unsigned bits = 0;
  for (SignalId id : control_registers_) bits += info_[id].width;
  return bits;
}

SignalId Design::add_signal(std::string path, unsigned width, SignalKind kind, SignalClass cls) {
  if (by_path_.contains(path)) throw InvariantViolation("duplicate signal path " + path);
  const auto id = static_cast<SignalId>(info_.size());
  by_path_.emplace(path, id);
  info_.push_back(SignalInfo{std::move(path), width, kind, cls});
  values_.emplace_back(width, 0);
  forces_.emplace_back();
  if (cls == SignalClass::kControl) {
    if (kind == SignalKind::kPrimaryOutput) level1_.push_back(id);
    if (kind == SignalKind::kSubmoduleOutput) level2_.push_back(id);
  }
  return id;
}

SignalId Design::add_control_register(std::string path, unsigned width) {
  const SignalId id =
      add_signal(std::move(path), width, SignalKind::kRegister, SignalClass::kControl);
  control_registers_.push_back(id);
  return id;
}

SignalId Design::add_primary_control_input(std::string path, unsigned width) {
  const SignalId id =
      add_signal(std::move(path), width, SignalKind::kPrimaryInput, SignalClass::kControl);
  primary_control_inputs_.push_back(id);
  return id;
}

void Design::drive(SignalId id, u128 v) {
  if (forces_[id]) {
    values_[id] = *forces_[id];
  } else {
    values_[id] = values_[id].with_value(v);
  }
}

void Design::clear_all_values() {
  for (auto& v : values_) v = v.with_value(0);
  release_all_forces();
}

}  // namespace ctlmon
