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

#include "ctlmon/petri.hpp"

#include <charconv>
#include <set>
#include <sstream>

#include "ctlmon/errors.hpp"

namespace ctlmon {

std::string_view to_string(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::kPetri: return "petri";
    case DetectorKind::kSequence: return "sequence";
    case DetectorKind::kDuplication: return "duplication";
  }
  return "?";
}

DetectorKind parse_detector_kind(std::string_view s) {
  if (s == "petri") return DetectorKind::kPetri;
  if (s == "sequence") return DetectorKind::kSequence;
  if (s == "duplication") return DetectorKind::kDuplication;
  throw ConfigError("unknown detector kind '" + std::string(s) + "'");
}

std::uint64_t Marking::total() const {
  std::uint64_t sum = 0;
  for (auto t : tokens) sum += t;
  return sum;
}

PetriNet::PetriNet(std::string name, std::vector<std::string> places, Marking initial,
                   std::vector<std::string> transitions, std::vector<Arc> arcs,
                   std::optional<TransitionId> expected_final)
    : name_(std::move(name)),
      places_(std::move(places)),
      transitions_(std::move(transitions)),
      arcs_(std::move(arcs)),
      initial_(std::move(initial)),
      expected_final_(expected_final) {
  if (name_.empty()) throw ConfigError("net without a name");
  std::set<std::string> names;
  for (const auto& p : places_) {
    if (!names.insert(p).second) throw ConfigError("net " + name_ + ": duplicate vertex " + p);
  }
  for (const auto& t : transitions_) {
    if (!names.insert(t).second) throw ConfigError("net " + name_ + ": duplicate vertex " + t);
  }
  if (initial_.tokens.size() != places_.size()) {
    throw ConfigError("net " + name_ + ": initial marking size does not match place count");
  }
  inputs_.resize(transitions_.size());
  outputs_.resize(transitions_.size());
  for (const Arc& a : arcs_) {
    if (a.place >= places_.size() || a.transition >= transitions_.size()) {
      throw ConfigError("net " + name_ + ": arc references an unknown vertex");
    }
    auto& side = a.direction == Arc::Direction::kPlaceToTransition ? inputs_ : outputs_;
    side[a.transition].push_back(a.place);
  }
  for (TransitionId t = 0; t < transitions_.size(); ++t) {
    if (inputs_[t].empty() || outputs_[t].empty()) {
      throw ConfigError("net " + name_ + ": transition " + transitions_[t] +
                        " needs at least one input and one output place");
    }
  }
  if (expected_final_ && *expected_final_ >= transitions_.size()) {
    throw ConfigError("net " + name_ + ": unknown expected final transition");
  }
}

std::optional<PlaceId> PetriNet::place_id(std::string_view name) const {
  for (PlaceId p = 0; p < places_.size(); ++p) {
    if (places_[p] == name) return p;
  }
  return std::nullopt;
}

std::optional<TransitionId> PetriNet::transition_id(std::string_view name) const {
  for (TransitionId t = 0; t < transitions_.size(); ++t) {
    if (transitions_[t] == name) return t;
  }
  return std::nullopt;
}

TransitionId PetriNet::require_transition(std::string_view name) const {
  if (auto t = transition_id(name)) return *t;
  throw ConfigError("net " + name_ + ": unknown transition " + std::string(name));
}

bool is_enabled(const PetriNet& net, const Marking& m, TransitionId t) {
  if (t >= net.transitions().size()) {
    throw ConfigError("net " + net.name() + ": unknown transition id " + std::to_string(t));
  }
  // A place listed twice as input needs two tokens.
  std::map<PlaceId, std::uint32_t> need;
  for (PlaceId p : net.inputs(t)) ++need[p];
  for (auto [p, n] : need) {
    if (m.tokens.at(p) < n) return false;
  }
  return true;
}

Marking fire(const PetriNet& net, const Marking& m, TransitionId t) {
  if (!is_enabled(net, m, t)) {
    throw ContractViolation("net " + net.name() + ": transition " + net.transitions()[t] +
                            " fired while disabled");
  }
  Marking next = m;
  for (PlaceId p : net.inputs(t)) --next.tokens[p];
  for (PlaceId p : net.outputs(t)) ++next.tokens[p];
  return next;
}

void validate_event(const PetriNet& net, const EventSpec& e) {
  if (e.transition >= net.transitions().size()) {
    throw ConfigError("net " + net.name() + ": event bound to an unknown transition");
  }
  const int type = static_cast<int>(e.type);
  if (type < 1 || type > 4) {
    throw ConfigError("net " + net.name() + ": event type must be 1..4");
  }
  if ((type == 2 || type == 4) && !e.target) {
    throw ConfigError("net " + net.name() + ": event type " + std::to_string(type) +
                      " on " + e.signal + " needs a target value");
  }
  if ((type == 3 || type == 4) && e.index == 0) {
    throw ConfigError("net " + net.name() + ": event type " + std::to_string(type) + " on " +
                      e.signal + " needs a positive index");
  }
  if (e.signal.empty()) throw ConfigError("net " + net.name() + ": event without a signal");
}

namespace {

// Whether the event occurs given the old and new value; advances the
// per-event change counter for types 3 and 4.
bool event_occurs(const EventSpec& e, const BitVec& prev, const BitVec& now,
                  std::uint32_t& counter) {
  if (prev.value() == now.value()) return false;
  switch (e.type) {
    case EventType::kAnyChange:
      return true;
    case EventType::kChangeTo:
      return now.value() == *e.target;
    case EventType::kNthChange:
      if (counter < UINT32_MAX) ++counter;
      return counter == e.index;
    case EventType::kNthChangeTo:
      if (now.value() != *e.target) return false;
      if (counter < UINT32_MAX) ++counter;
      return counter == e.index;
  }
  return false;
}

void apply_event(PnMonitorState& s, const PetriNet& net, TransitionId t, std::uint64_t cycle) {
  if (is_enabled(net, s.marking, t)) {
    s.marking = fire(net, s.marking, t);
    s.last_fired = t;
  } else if (!s.fault) {
    s.fault = true;
    s.fault_cycle = cycle;
  }
}

const BitVec& lookup(const Snapshot& snap, const std::string& signal) {
  auto it = snap.find(signal);
  if (it == snap.end()) throw ConfigError("snapshot lacks event signal " + signal);
  return it->second;
}

}  // namespace

PnMonitorState initial_state(const NetDefinition& def, const Snapshot& reset_values) {
  PnMonitorState s;
  s.marking = def.net.initial_marking();
  s.change_counters.assign(def.events.size(), 0);
  s.prev_values.reserve(def.events.size());
  for (const auto& e : def.events) s.prev_values.push_back(lookup(reset_values, e.signal));
  return s;
}

PnMonitorState observe_cycle(PnMonitorState state, const NetDefinition& def, const Snapshot& snap,
                             std::uint64_t cycle) {
  if (state.prev_values.size() != def.events.size()) {
    throw ConfigError("monitor state does not belong to net " + def.net.name());
  }
  std::vector<const BitVec*> now;
  now.reserve(def.events.size());
  for (const auto& e : def.events) now.push_back(&lookup(snap, e.signal));
  for (std::size_t i = 0; i < def.events.size(); ++i) {
    if (event_occurs(def.events[i], state.prev_values[i], *now[i], state.change_counters[i])) {
      apply_event(state, def.net, def.events[i].transition, cycle);
    }
  }
  for (std::size_t i = 0; i < def.events.size(); ++i) state.prev_values[i] = *now[i];
  return state;
}

bool finalize(PnMonitorState& state, const PetriNet& net) {
  if (!state.fault && net.expected_final() && state.last_fired != net.expected_final()) {
    state.fault = true;
    state.via_final = true;
  }
  return state.fault;
}

PetriDetector::PetriDetector(std::shared_ptr<const NetDefinition> def) : def_(std::move(def)) {
  for (const auto& e : def_->events) validate_event(def_->net, e);
}

void PetriDetector::on_reset(const Design& design) {
  if (bound_ != &design) {
    signal_ids_.clear();
    for (const auto& e : def_->events) signal_ids_.push_back(design.require(e.signal));
    bound_ = &design;
  }
  state_ = PnMonitorState{};
  state_.marking = def_->net.initial_marking();
  state_.change_counters.assign(def_->events.size(), 0);
  state_.prev_values.clear();
  for (auto id : signal_ids_) state_.prev_values.push_back(design.read(id));
  end_cycle_ = 0;
}

void PetriDetector::on_cycle(const Design& design, std::uint64_t cycle) {
  const auto values = design.values();
  const auto& events = def_->events;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (event_occurs(events[i], state_.prev_values[i], values[signal_ids_[i]],
                     state_.change_counters[i])) {
      apply_event(state_, def_->net, events[i].transition, cycle);
    }
  }
  for (std::size_t i = 0; i < events.size(); ++i) state_.prev_values[i] = values[signal_ids_[i]];
}

void PetriDetector::finalize(std::uint64_t end_cycle) {
  end_cycle_ = end_cycle;
  ctlmon::finalize(state_, def_->net);
}

DetectionRecord PetriDetector::record() const {
  DetectionRecord r;
  r.detected = state_.fault;
  r.via_final = state_.via_final;
  if (state_.fault) r.cycle = state_.via_final ? end_cycle_ : *state_.fault_cycle;
  return r;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& msg) {
  throw ConfigError("net file line " + std::to_string(line_no) + ": " + msg);
}

std::uint32_t parse_u32(std::string_view s, std::size_t line_no) {
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    parse_fail(line_no, "expected a non-negative integer, got '" + std::string(s) + "'");
  }
  return v;
}

struct PendingNet {
  std::string name;
  std::vector<std::string> places;
  std::vector<std::uint32_t> tokens;
  std::vector<std::string> transitions;
  std::vector<std::pair<std::string, std::string>> arcs;
  std::optional<std::string> final_transition;
  struct PendingEvent {
    std::string transition, signal;
    int type = 0;
    std::optional<u128> target;
    std::uint32_t index = 0;
    std::size_t line_no = 0;
  };
  std::vector<PendingEvent> events;
  std::size_t line_no = 0;
};

NetDefinition build(const PendingNet& p) {
  auto index_of = [](const std::vector<std::string>& v, const std::string& s) -> std::optional<std::uint32_t> {
    for (std::uint32_t i = 0; i < v.size(); ++i) {
      if (v[i] == s) return i;
    }
    return std::nullopt;
  };
  std::vector<Arc> arcs;
  for (const auto& [from, to] : p.arcs) {
    auto fp = index_of(p.places, from), ft = index_of(p.transitions, from);
    auto tp = index_of(p.places, to), tt = index_of(p.transitions, to);
    if (fp && tt) {
      arcs.push_back({Arc::Direction::kPlaceToTransition, *fp, *tt});
    } else if (ft && tp) {
      arcs.push_back({Arc::Direction::kTransitionToPlace, *tp, *ft});
    } else {
      parse_fail(p.line_no, "net " + p.name + ": arc " + from + " -> " + to +
                                " must connect a place and a transition");
    }
  }
  std::optional<TransitionId> final_t;
  if (p.final_transition) {
    final_t = index_of(p.transitions, *p.final_transition);
    if (!final_t) parse_fail(p.line_no, "net " + p.name + ": unknown final transition");
  }
  NetDefinition def{PetriNet(p.name, p.places, Marking{p.tokens}, p.transitions, std::move(arcs),
                             final_t),
                    {}};
  for (const auto& pe : p.events) {
    auto t = index_of(p.transitions, pe.transition);
    if (!t) parse_fail(pe.line_no, "event bound to unknown transition " + pe.transition);
    EventSpec e;
    e.signal = pe.signal;
    e.type = static_cast<EventType>(pe.type);
    e.target = pe.target;
    e.index = pe.index;
    e.transition = *t;
    try {
      validate_event(def.net, e);
    } catch (const ConfigError& err) {
      parse_fail(pe.line_no, err.what());
    }
    def.events.push_back(std::move(e));
  }
  return def;
}

}  // namespace

std::vector<NetDefinition> parse_nets(std::string_view text) {
  std::vector<NetDefinition> out;
  std::optional<PendingNet> cur;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    auto tok = split_ws(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    const std::string& kw = tok[0];
    if (kw == "net") {
      if (cur) parse_fail(line_no, "'net' inside net " + cur->name + " (missing 'end')");
      if (tok.size() != 2) parse_fail(line_no, "expected: net <name>");
      cur.emplace();
      cur->name = tok[1];
      cur->line_no = line_no;
      continue;
    }
    if (!cur) parse_fail(line_no, "'" + kw + "' outside a net block");
    if (kw == "place") {
      if (tok.size() != 3) parse_fail(line_no, "expected: place <name> <tokens>");
      cur->places.push_back(tok[1]);
      cur->tokens.push_back(parse_u32(tok[2], line_no));
    } else if (kw == "transition") {
      if (tok.size() != 2) parse_fail(line_no, "expected: transition <name>");
      cur->transitions.push_back(tok[1]);
    } else if (kw == "arc") {
      if (tok.size() != 3) parse_fail(line_no, "expected: arc <from> <to>");
      cur->arcs.emplace_back(tok[1], tok[2]);
    } else if (kw == "final") {
      if (tok.size() != 2) parse_fail(line_no, "expected: final <transition>");
      if (cur->final_transition) parse_fail(line_no, "duplicate 'final'");
      cur->final_transition = tok[1];
    } else if (kw == "event") {
      if (tok.size() < 4) parse_fail(line_no, "expected: event <transition> <signal> type=<n> ...");
      PendingNet::PendingEvent e;
      e.transition = tok[1];
      e.signal = tok[2];
      e.line_no = line_no;
      for (std::size_t i = 3; i < tok.size(); ++i) {
        const auto eq = tok[i].find('=');
        if (eq == std::string::npos) parse_fail(line_no, "expected key=value, got " + tok[i]);
        const std::string key = tok[i].substr(0, eq);
        const std::string val = tok[i].substr(eq + 1);
        if (key == "type") {
          e.type = static_cast<int>(parse_u32(val, line_no));
        } else if (key == "target") {
          try {
            e.target = u128_from_hex(val);
          } catch (const ConfigError& err) {
            parse_fail(line_no, err.what());
          }
        } else if (key == "index") {
          e.index = parse_u32(val, line_no);
        } else {
          parse_fail(line_no, "unknown event attribute " + key);
        }
      }
      if (e.type < 1 || e.type > 4) parse_fail(line_no, "event type must be 1..4");
      cur->events.push_back(std::move(e));
    } else if (kw == "end") {
      try {
        out.push_back(build(*cur));
      } catch (const ConfigError& err) {
        const std::string msg = err.what();
        if (msg.rfind("net file line", 0) == 0) throw;
        parse_fail(line_no, msg);
      }
      cur.reset();
    } else {
      parse_fail(line_no, "unknown keyword '" + kw + "'");
    }
  }
  if (cur) parse_fail(line_no, "net " + cur->name + " is missing 'end'");
  return out;
}

std::string serialize_nets(const std::vector<NetDefinition>& nets) {
  std::ostringstream os;
  for (const auto& def : nets) {
    const PetriNet& n = def.net;
    os << "net " << n.name() << '\n';
    for (PlaceId p = 0; p < n.places().size(); ++p) {
      os << "place " << n.places()[p] << ' ' << n.initial_marking().tokens[p] << '\n';
    }
    for (const auto& t : n.transitions()) os << "transition " << t << '\n';
    for (const Arc& a : n.arcs()) {
      if (a.direction == Arc::Direction::kPlaceToTransition) {
        os << "arc " << n.places()[a.place] << ' ' << n.transitions()[a.transition] << '\n';
      } else {
        os << "arc " << n.transitions()[a.transition] << ' ' << n.places()[a.place] << '\n';
      }
    }
    if (n.expected_final()) os << "final " << n.transitions()[*n.expected_final()] << '\n';
    for (const auto& e : def.events) {
      os << "event " << n.transitions()[e.transition] << ' ' << e.signal
         << " type=" << static_cast<int>(e.type);
      if (e.target) os << " target=0x" << u128_to_hex(*e.target);
      if (e.index != 0) os << " index=" << e.index;
      os << '\n';
    }
    os << "end\n";
  }
  return os.str();
}

}  // namespace ctlmon
