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


// Independent reference implementations used by the unit and acceptance
// tests. They work from raw definitions and never call the code under test
// beyond reading its plain data structures.

#ifndef CTLMON_TESTS_ORACLES_HPP_
#define CTLMON_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ctlmon/analysis.hpp"
#include "ctlmon/fault.hpp"
#include "ctlmon/petri.hpp"
#include "ctlmon/sequence.hpp"

namespace ctlmon::oracle {

// ---------------------------------------------------------------------------
// Petri nets

// Arc multiplicity per (transition, place), rebuilt from the arc list.
struct Incidence {
  std::vector<std::vector<unsigned>> pre;   // [t][p]
  std::vector<std::vector<unsigned>> post;  // [t][p]
};

inline Incidence incidence(const PetriNet& net) {
  const auto np = net.places().size(), nt = net.transitions().size();
  Incidence inc{std::vector(nt, std::vector<unsigned>(np, 0)),
                std::vector(nt, std::vector<unsigned>(np, 0))};
  for (const Arc& a : net.arcs()) {
    auto& row = a.direction == Arc::Direction::kPlaceToTransition ? inc.pre : inc.post;
    ++row[a.transition][a.place];
  }
  return inc;
}

inline bool enabled(const Incidence& inc, const std::vector<std::uint32_t>& m, std::size_t t) {
  for (std::size_t p = 0; p < m.size(); ++p) {
    if (m[p] < inc.pre[t][p]) return false;
  }
  return true;
}

inline std::vector<std::uint32_t> fire(const Incidence& inc, std::vector<std::uint32_t> m,
                                       std::size_t t) {
  for (std::size_t p = 0; p < m.size(); ++p) m[p] = m[p] - inc.pre[t][p] + inc.post[t][p];
  return m;
}

// Breadth-first marking graph. Exploration stops at `limit` markings, or
// past markings holding more than `token_cap` tokens in one place, so
// unbounded nets still terminate.
inline std::vector<std::vector<std::uint32_t>> reachable(const PetriNet& net,
                                                         std::size_t limit = 4000,
                                                         std::uint32_t token_cap = 12) {
  const Incidence inc = incidence(net);
  std::set<std::vector<std::uint32_t>> seen{net.initial_marking().tokens};
  std::vector<std::vector<std::uint32_t>> order{net.initial_marking().tokens};
  for (std::size_t i = 0; i < order.size() && order.size() < limit; ++i) {
    const auto m = order[i];
    if (*std::max_element(m.begin(), m.end()) > token_cap) continue;
    for (std::size_t t = 0; t < net.transitions().size(); ++t) {
      if (!enabled(inc, m, t)) continue;
      auto next = fire(inc, m, t);
      if (seen.insert(next).second) order.push_back(std::move(next));
    }
  }
  return order;
}

// Random net with every transition having at least one input and one
// output place; parallel arcs are allowed.
inline PetriNet random_net(std::mt19937_64& rng, const std::string& name) {
  auto pick = [&](unsigned lo, unsigned hi) {
    return std::uniform_int_distribution<unsigned>(lo, hi)(rng);
  };
  const unsigned np = pick(1, 6), nt = pick(1, 6);
  std::vector<std::string> places, transitions;
  Marking m0;
  for (unsigned p = 0; p < np; ++p) {
    places.push_back("p" + std::to_string(p));
    m0.tokens.push_back(pick(0, 2));
  }
  std::vector<Arc> arcs;
  for (unsigned t = 0; t < nt; ++t) {
    transitions.push_back("t" + std::to_string(t));
    const unsigned nin = pick(1, 2), nout = pick(1, 2);
    for (unsigned k = 0; k < nin; ++k) {
      arcs.push_back({Arc::Direction::kPlaceToTransition, pick(0, np - 1), t});
    }
    for (unsigned k = 0; k < nout; ++k) {
      arcs.push_back({Arc::Direction::kTransitionToPlace, pick(0, np - 1), t});
    }
  }
  std::optional<TransitionId> fin;
  if (pick(0, 1)) fin = pick(0, nt - 1);
  return PetriNet(name, places, m0, transitions, arcs, fin);
}

struct PnVerdict {
  bool fault = false;
  std::optional<std::uint64_t> cycle;
  bool via_final = false;
  friend bool operator==(const PnVerdict&, const PnVerdict&) = default;
};

// Replays a net monitor over per-cycle values of its event signals.
// values[0] is the reset value; values[c] is cycle c. Each event reads the
// signal named by index into `signals`.
inline PnVerdict pn_monitor(const NetDefinition& def, const std::vector<std::string>& signals,
                            const std::vector<std::vector<u128>>& values) {
  const Incidence inc = incidence(def.net);
  std::vector<std::uint32_t> m = def.net.initial_marking().tokens;
  std::vector<std::uint32_t> changes(def.events.size(), 0);
  std::optional<std::size_t> last;
  PnVerdict v;
  auto column = [&](const std::string& s) {
    return static_cast<std::size_t>(std::find(signals.begin(), signals.end(), s) - signals.begin());
  };
  for (std::size_t c = 1; c < values.size(); ++c) {
    for (std::size_t e = 0; e < def.events.size(); ++e) {
      const EventSpec& ev = def.events[e];
      const std::size_t col = column(ev.signal);
      const u128 before = values[c - 1][col], after = values[c][col];
      if (before == after) continue;
      bool occurs = false;
      switch (ev.type) {
        case EventType::kAnyChange:
          occurs = true;
          break;
        case EventType::kChangeTo:
          occurs = after == *ev.target;
          break;
        case EventType::kNthChange:
          occurs = ++changes[e] == ev.index;
          break;
        case EventType::kNthChangeTo:
          if (after == *ev.target) occurs = ++changes[e] == ev.index;
          break;
      }
      if (!occurs) continue;
      if (enabled(inc, m, ev.transition)) {
        m = fire(inc, m, ev.transition);
        last = ev.transition;
      } else if (!v.fault) {
        v.fault = true;
        v.cycle = c;
      }
    }
  }
  if (!v.fault && def.net.expected_final() && last != *def.net.expected_final()) {
    v.fault = true;
    v.via_final = true;
  }
  return v;
}

// ---------------------------------------------------------------------------
// State-sequence tables

using Pair = std::pair<std::optional<u128>, u128>;

struct RefTable {
  std::set<Pair> pairs;
  std::optional<u128> end;
};

inline RefTable learn(const std::vector<u128>& keys) {
  RefTable t;
  std::optional<u128> prev;
  for (u128 k : keys) {
    t.pairs.insert({prev, k});
    prev = k;
  }
  t.end = prev;
  return t;
}

// Index of the first key whose pair is missing, or keys.size().
inline std::size_t first_violation(const RefTable& t, const std::vector<u128>& keys) {
  std::optional<u128> prev;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (!t.pairs.contains({prev, keys[i]})) return i;
    prev = keys[i];
  }
  return keys.size();
}

// ---------------------------------------------------------------------------
// Metrics and selection

struct RefMetrics {
  std::uint64_t n_oe = 0, n_tp = 0, n_to = 0, n_benign = 0;
  double latency_sum = 0;
  std::uint64_t latency_n = 0;
};

inline RefMetrics metrics(const DetectionMatrix& m, const std::vector<std::size_t>& cols) {
  RefMetrics r;
  for (const MatrixRow& row : m.rows) {
    bool hit = false, mid = false;
    std::optional<std::uint64_t> first;
    for (std::size_t c : cols) {
      const DetectionRecord& d = row.detections[c];
      if (!d.detected) continue;
      hit = true;
      if (d.via_final) continue;
      mid = true;
      if (d.cycle && (!first || *d.cycle < *first)) first = *d.cycle;
    }
    if (row.output_class == OutputClass::kCorrect) {
      r.n_benign += hit;
      continue;
    }
    ++r.n_oe;
    if (!hit) continue;
    ++r.n_tp;
    if (!mid) {
      ++r.n_to;
    } else if (first) {
      r.latency_sum += static_cast<double>(*first) - static_cast<double>(row.cycle);
      ++r.latency_n;
    }
  }
  return r;
}

struct RefChoice {
  std::vector<std::string> ids;  // sorted
  double cost = 0;
  std::uint64_t n_tp = 0;
  bool feasible = false;
};

// Enumerates every subset of the non-excluded columns. Orders candidates
// the documented way: max-dr mode by (n_tp desc, cost asc, ids asc),
// min-area mode by (cost asc, n_tp desc, ids asc). An unmet dr target falls
// back to the cheapest subset reaching the best achievable dr.
inline RefChoice brute_force(const DetectionMatrix& m, SelectMode mode, double bound,
                             const std::string& exclude = kDuplicationId) {
  std::vector<std::size_t> cand;
  for (std::size_t i = 0; i < m.detectors.size(); ++i) {
    if (m.detectors[i].id != exclude) cand.push_back(i);
  }
  std::vector<RefChoice> all;
  std::uint64_t best_tp = 0, n_oe = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cand.size()); ++mask) {
    RefChoice c;
    std::vector<std::size_t> cols;
    for (std::size_t b = 0; b < cand.size(); ++b) {
      if (!(mask >> b & 1)) continue;
      cols.push_back(cand[b]);
      c.ids.push_back(m.detectors[cand[b]].id);
      c.cost += m.detectors[cand[b]].area_cost;
    }
    std::sort(c.ids.begin(), c.ids.end());
    const RefMetrics r = metrics(m, cols);
    c.n_tp = r.n_tp;
    n_oe = r.n_oe;
    best_tp = std::max(best_tp, c.n_tp);
    all.push_back(std::move(c));
  }
  const auto tp_better = [](const RefChoice& a, const RefChoice& b) {
    if (a.n_tp != b.n_tp) return a.n_tp > b.n_tp;
    if (a.cost != b.cost) return a.cost < b.cost;
    return a.ids < b.ids;
  };
  const auto cost_better = [](const RefChoice& a, const RefChoice& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.n_tp != b.n_tp) return a.n_tp > b.n_tp;
    return a.ids < b.ids;
  };
  std::optional<RefChoice> best;
  for (auto& c : all) {
    const double dr = static_cast<double>(c.n_tp) / static_cast<double>(n_oe);
    const bool ok = mode == SelectMode::kMaxDrUnderArea ? c.cost <= bound : dr >= bound;
    if (!ok) continue;
    c.feasible = true;
    if (!best) {
      best = c;
    } else if (mode == SelectMode::kMaxDrUnderArea ? tp_better(c, *best) : cost_better(c, *best)) {
      best = c;
    }
  }
  if (best) return *best;
  // Only the dr-target mode can be infeasible (the empty set fits any budget).
  for (const auto& c : all) {
    if (c.n_tp != best_tp) continue;
    if (!best || cost_better(c, *best)) best = c;
  }
  best->feasible = false;
  return *best;
}

// Random matrix: `detectors` columns with costs in 0.25 steps and rows of
// mixed output classes. Detection cycles are at or after the row's cycle.
inline DetectionMatrix random_matrix(std::mt19937_64& rng, unsigned detectors, unsigned rows) {
  auto pick = [&](std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
  };
  DetectionMatrix m;
  m.meta = MatrixMeta{"test", "-", 1, "conv", 1, 100, 8};
  for (unsigned d = 0; d < detectors; ++d) {
    m.detectors.push_back({"d" + std::to_string(d), DetectorKind::kPetri,
                           0.25 * static_cast<double>(pick(1, 40))});
  }
  const OutputClass classes[] = {OutputClass::kCorrect, OutputClass::kSdc,
                                 OutputClass::kPremature, OutputClass::kTimeout};
  std::vector<unsigned> strength(detectors);
  for (auto& s : strength) s = static_cast<unsigned>(pick(5, 60));
  for (unsigned i = 0; i < rows; ++i) {
    MatrixRow r;
    r.id = i;
    r.target = "reg";
    r.bit_or_window = "0";
    r.cycle = pick(0, 90);
    r.output_class = classes[pick(0, 3)];
    r.cycles_run = 100;
    for (unsigned d = 0; d < detectors; ++d) {
      DetectionRecord rec;
      if (pick(0, 99) < strength[d]) {
        rec.detected = true;
        rec.via_final = pick(0, 4) == 0;
        rec.cycle = rec.via_final ? 100 : r.cycle + pick(0, 9);
      }
      r.detections.push_back(rec);
    }
    m.rows.push_back(std::move(r));
  }
  return m;
}

}  // namespace ctlmon::oracle

#endif  // CTLMON_TESTS_ORACLES_HPP_
