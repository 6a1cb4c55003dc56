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

// Place/transition nets driven by signal events.
//
// A net is a directed bipartite graph of places and transitions. A
// transition is enabled when each of its input places holds a token;
// firing it consumes one token per input place and produces one per output
// place. Each transition is bound to one or more signal events. When an
// event occurs and its transition is enabled, the transition fires.
// When the transition is disabled, the firing sequence is abnormal and the
// monitor latches a fault.

#ifndef CTLMON_PETRI_HPP_
#define CTLMON_PETRI_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctlmon/bitvec.hpp"
#include "ctlmon/detector.hpp"

namespace ctlmon {

using PlaceId = std::uint32_t;
using TransitionId = std::uint32_t;

struct Marking {
  std::vector<std::uint32_t> tokens;  // indexed by PlaceId

  std::uint64_t total() const;
  friend bool operator==(const Marking&, const Marking&) = default;
  friend auto operator<=>(const Marking&, const Marking&) = default;
};

struct Arc {
  enum class Direction { kPlaceToTransition, kTransitionToPlace };
  Direction direction;
  PlaceId place;
  TransitionId transition;
  friend bool operator==(const Arc&, const Arc&) = default;
};

class PetriNet {
 public:
  // Throws ConfigError if names collide, an arc references an unknown
  // vertex, or a transition lacks an input or output place.
  PetriNet(std::string name, std::vector<std::string> places, Marking initial,
           std::vector<std::string> transitions, std::vector<Arc> arcs,
           std::optional<TransitionId> expected_final);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& places() const { return places_; }
  const std::vector<std::string>& transitions() const { return transitions_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const Marking& initial_marking() const { return initial_; }
  const std::optional<TransitionId>& expected_final() const { return expected_final_; }

  const std::vector<PlaceId>& inputs(TransitionId t) const { return inputs_[t]; }
  const std::vector<PlaceId>& outputs(TransitionId t) const { return outputs_[t]; }

  std::optional<PlaceId> place_id(std::string_view name) const;
  std::optional<TransitionId> transition_id(std::string_view name) const;
  // Throws ConfigError.
  TransitionId require_transition(std::string_view name) const;

  friend bool operator==(const PetriNet& a, const PetriNet& b) {
    return a.name_ == b.name_ && a.places_ == b.places_ && a.transitions_ == b.transitions_ &&
           a.arcs_ == b.arcs_ && a.initial_ == b.initial_ && a.expected_final_ == b.expected_final_;
  }

 private:
  std::string name_;
  std::vector<std::string> places_;
  std::vector<std::string> transitions_;
  std::vector<Arc> arcs_;
  Marking initial_;
  std::optional<TransitionId> expected_final_;
  std::vector<std::vector<PlaceId>> inputs_;
  std::vector<std::vector<PlaceId>> outputs_;
};

// Throws ConfigError for an unknown transition.
bool is_enabled(const PetriNet& net, const Marking& m, TransitionId t);
// Throws ContractViolation if t is not enabled in m.
Marking fire(const PetriNet& net, const Marking& m, TransitionId t);

enum class EventType : int {
  kAnyChange = 1,    // any change of the signal value
  kChangeTo = 2,     // change to `target`
  kNthChange = 3,    // the index-th change since reset
  kNthChangeTo = 4,  // the index-th change to `target` since reset
};

struct EventSpec {
  std::string signal;
  EventType type = EventType::kAnyChange;
  std::optional<u128> target;  // types 2 and 4
  std::uint32_t index = 0;     // types 3 and 4, 1-based
  TransitionId transition = 0;

  friend bool operator==(const EventSpec&, const EventSpec&) = default;
};

// Throws ConfigError if the fields required by the type are missing.
void validate_event(const PetriNet& net, const EventSpec& event);

// A net together with its signal bindings: one detector's definition.
struct NetDefinition {
  PetriNet net;
  std::vector<EventSpec> events;
  friend bool operator==(const NetDefinition&, const NetDefinition&) = default;
};

struct PnMonitorState {
  Marking marking;
  std::optional<TransitionId> last_fired;
  bool fault = false;
  std::optional<std::uint64_t> fault_cycle;
  bool via_final = false;
  std::vector<std::uint32_t> change_counters;  // per event
  std::vector<BitVec> prev_values;              // per event
};

using Snapshot = std::map<std::string, BitVec>;

// State after reset: prev_values come from the reset snapshot, no events.
// Throws ConfigError if an event signal is missing from the snapshot.
PnMonitorState initial_state(const NetDefinition& def, const Snapshot& reset_values);

// Processes the events of one cycle in declaration order.
PnMonitorState observe_cycle(PnMonitorState state, const NetDefinition& def, const Snapshot& snap,
                             std::uint64_t cycle);

// End-of-run check of the last fired transition. Returns the final fault
// flag. A net without an expected final transition never faults here.
bool finalize(PnMonitorState& state, const PetriNet& net);

// Online form of the monitor, bound to a design's signal ids.
class PetriDetector final : public Detector {
 public:
  explicit PetriDetector(std::shared_ptr<const NetDefinition> def);

  const std::string& name() const override { return def_->net.name(); }
  DetectorKind kind() const override { return DetectorKind::kPetri; }
  void on_reset(const Design& design) override;
  void on_cycle(const Design& design, std::uint64_t cycle) override;
  void finalize(std::uint64_t end_cycle) override;
  DetectionRecord record() const override;

  const PnMonitorState& state() const { return state_; }
  const NetDefinition& definition() const { return *def_; }

 private:
  void process(std::size_t event_index, const BitVec& value, std::uint64_t cycle);

  std::shared_ptr<const NetDefinition> def_;
  std::vector<std::uint32_t> signal_ids_;
  const Design* bound_ = nullptr;
  PnMonitorState state_;
  std::uint64_t end_cycle_ = 0;
};

// Text format, one or more nets:
//
//   net <name>
//   place <name> <tokens>
//   transition <name>
//   arc <from> <to>
//   final <transition>
//   event <transition> <signal> type=<1-4> [target=<hex>] [index=<n>]
//   end
//
// `#` starts a comment line. Throws ConfigError with a line number.
std::vector<NetDefinition> parse_nets(std::string_view text);
std::string serialize_nets(const std::vector<NetDefinition>& nets);

}  // namespace ctlmon

#endif  // CTLMON_PETRI_HPP_
