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


#include "ctlmon/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "ctlmon/errors.hpp"

namespace ctlmon {
namespace {

bool is_error(const MatrixRow& r) { return r.output_class != OutputClass::kCorrect; }

std::vector<std::size_t> resolve(const DetectionMatrix& m, const std::vector<std::string>& ids) {
  std::vector<std::size_t> cols;
  for (const auto& id : ids) {
    const auto c = m.column(id);
    if (!c) throw ConfigError("unknown detector '" + id + "'");
    cols.push_back(*c);
  }
  return cols;
}

using Bits = std::vector<std::uint64_t>;

std::size_t popcount(const Bits& b) {
  std::size_t n = 0;
  for (auto w : b) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

// Error-row coverage of each candidate column.
struct Problem {
  std::vector<std::string> ids;  // sorted
  std::vector<double> cost;
  std::vector<Bits> cover;
  std::size_t n_oe = 0;
  std::size_t words = 0;
};

Problem make_problem(const DetectionMatrix& m, const std::vector<std::string>& exclude) {
  m.check();
  Problem p;
  std::vector<std::size_t> errs;
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    if (is_error(m.rows[i])) errs.push_back(i);
  }
  p.n_oe = errs.size();
  if (p.n_oe == 0) throw UndefinedMetric("no output errors in the matrix; detection rate is undefined");
  p.words = (p.n_oe + 63) / 64;
  std::vector<std::size_t> cols;
  for (std::size_t c = 0; c < m.detectors.size(); ++c) {
    if (std::find(exclude.begin(), exclude.end(), m.detectors[c].id) == exclude.end()) cols.push_back(c);
  }
  std::sort(cols.begin(), cols.end(), [&](auto a, auto b) { return m.detectors[a].id < m.detectors[b].id; });
  for (std::size_t c : cols) {
    p.ids.push_back(m.detectors[c].id);
    p.cost.push_back(m.detectors[c].area_cost);
    Bits b(p.words, 0);
    for (std::size_t e = 0; e < errs.size(); ++e) {
      if (m.rows[errs[e]].detections[c].detected) b[e / 64] |= 1ull << (e % 64);
    }
    p.cover.push_back(std::move(b));
  }
  return p;
}

struct Candidate {
  std::vector<std::size_t> members;  // ascending indices into Problem::ids
  double cost = 0;
  std::size_t n_tp = 0;
  bool valid = false;
};

bool lex_less(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool feasible(const Candidate& c, SelectMode mode, double bound, std::size_t n_oe) {
  if (mode == SelectMode::kMaxDrUnderArea) return c.cost <= bound;
  return static_cast<double>(c.n_tp) >= bound * static_cast<double>(n_oe) - 1e-9;
}

bool better(const Candidate& a, const Candidate& b, SelectMode mode) {
  if (!b.valid) return a.valid;
  if (!a.valid) return false;
  if (mode == SelectMode::kMaxDrUnderArea) {
    if (a.n_tp != b.n_tp) return a.n_tp > b.n_tp;
    if (a.cost != b.cost) return a.cost < b.cost;
  } else {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.n_tp != b.n_tp) return a.n_tp > b.n_tp;
  }
  return lex_less(a.members, b.members);
}

// Best feasible subset of `pool` (indices into p), by depth-first
// enumeration of all subsets.
Candidate exhaustive(const Problem& p, const std::vector<std::size_t>& pool, SelectMode mode,
                     double bound) {
  Candidate best;
  std::vector<std::size_t> chosen;
  std::vector<Bits> stack(pool.size() + 1, Bits(p.words, 0));
  auto rec = [&](auto&& self, std::size_t depth, double cost) -> void {
    if (mode == SelectMode::kMaxDrUnderArea && cost > bound) return;
    if (depth == pool.size()) {
      Candidate c;
      c.members = chosen;
      std::sort(c.members.begin(), c.members.end());
      c.cost = cost;
      c.n_tp = popcount(stack[depth]);
      c.valid = true;
      if (feasible(c, mode, bound, p.n_oe) && better(c, best, mode)) best = std::move(c);
      return;
    }
    stack[depth + 1] = stack[depth];
    self(self, depth + 1, cost);
    const std::size_t d = pool[depth];
    for (std::size_t w = 0; w < p.words; ++w) stack[depth + 1][w] = stack[depth][w] | p.cover[d][w];
    chosen.push_back(d);
    self(self, depth + 1, cost + p.cost[d]);
    chosen.pop_back();
  };
  rec(rec, 0, 0.0);
  return best;
}

Candidate evaluate(const Problem& p, std::vector<std::size_t> members) {
  std::sort(members.begin(), members.end());
  Candidate c;
  Bits b(p.words, 0);
  for (std::size_t d : members) {
    c.cost += p.cost[d];
    for (std::size_t w = 0; w < p.words; ++w) b[w] |= p.cover[d][w];
  }
  c.members = std::move(members);
  c.n_tp = popcount(b);
  c.valid = true;
  return c;
}

// Greedy by marginal detections per unit cost. Returns the picks in order.
std::vector<std::size_t> greedy(const Problem& p, SelectMode mode, double bound) {
  std::vector<std::size_t> picks;
  std::vector<bool> used(p.ids.size(), false);
  Bits cover(p.words, 0);
  double cost = 0;
  while (true) {
    if (mode == SelectMode::kMinAreaUnderDr &&
        static_cast<double>(popcount(cover)) >= bound * static_cast<double>(p.n_oe) - 1e-9) {
      break;
    }
    std::optional<std::size_t> pick;
    double pick_ratio = -1;
    std::size_t pick_gain = 0;
    for (std::size_t d = 0; d < p.ids.size(); ++d) {
      if (used[d]) continue;
      if (mode == SelectMode::kMaxDrUnderArea && cost + p.cost[d] > bound) continue;
      std::size_t gain = 0;
      for (std::size_t w = 0; w < p.words; ++w) {
        gain += static_cast<std::size_t>(std::popcount(p.cover[d][w] & ~cover[w]));
      }
      if (gain == 0) continue;
      const double ratio = p.cost[d] > 0 ? static_cast<double>(gain) / p.cost[d]
                                         : std::numeric_limits<double>::infinity();
      if (ratio > pick_ratio || (ratio == pick_ratio && gain > pick_gain)) {
        pick = d;
        pick_ratio = ratio;
        pick_gain = gain;
      }
    }
    if (!pick) break;
    used[*pick] = true;
    picks.push_back(*pick);
    cost += p.cost[*pick];
    for (std::size_t w = 0; w < p.words; ++w) cover[w] |= p.cover[*pick][w];
  }
  return picks;
}

constexpr std::size_t kExhaustiveLimit = 20;

Candidate search(const Problem& p, SelectMode mode, double bound, bool& exhaustive_mode) {
  std::vector<std::size_t> all(p.ids.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  if (all.size() <= kExhaustiveLimit) {
    exhaustive_mode = true;
    return exhaustive(p, all, mode, bound);
  }
  exhaustive_mode = false;
  const auto picks = greedy(p, mode, bound);
  Candidate best = evaluate(p, picks);
  if (!feasible(best, mode, bound, p.n_oe)) best = Candidate{};
  std::vector<std::size_t> pool = picks;
  std::vector<std::size_t> rest;
  for (std::size_t d : all) {
    if (std::find(pool.begin(), pool.end(), d) == pool.end()) rest.push_back(d);
  }
  auto score = [&](std::size_t d) {
    const double n = static_cast<double>(popcount(p.cover[d]));
    return p.cost[d] > 0 ? n / p.cost[d] : std::numeric_limits<double>::infinity() * (n > 0 ? 1 : 0);
  };
  std::stable_sort(rest.begin(), rest.end(), [&](auto a, auto b) { return score(a) > score(b); });
  pool.insert(pool.end(), rest.begin(), rest.end());
  pool.resize(std::min(pool.size(), kExhaustiveLimit));
  Candidate refined = exhaustive(p, pool, mode, bound);
  if (better(refined, best, mode)) best = std::move(refined);
  return best;
}

}  // namespace

Metrics metrics(const DetectionMatrix& m, const std::vector<std::string>& subset) {
  m.check();
  const auto cols = resolve(m, subset);
  Metrics out;
  double latency_sum = 0;
  std::uint64_t latency_n = 0;
  for (const auto& r : m.rows) {
    bool any = false, mid = false;
    std::optional<std::uint64_t> first;
    for (std::size_t c : cols) {
      const auto& d = r.detections[c];
      if (!d.detected) continue;
      any = true;
      if (!d.via_final) {
        mid = true;
        if (d.cycle && (!first || *d.cycle < *first)) first = d.cycle;
      }
    }
    if (!is_error(r)) {
      if (any) ++out.n_benign;
      continue;
    }
    ++out.n_oe;
    if (!any) continue;
    ++out.n_tp;
    if (!mid) {
      ++out.n_to;
    } else if (first) {
      latency_sum += static_cast<double>(*first) - static_cast<double>(r.cycle);
      ++latency_n;
    }
  }
  if (out.n_oe == 0) throw UndefinedMetric("no output errors in the matrix; detection rate is undefined");
  out.dr = static_cast<double>(out.n_tp) / static_cast<double>(out.n_oe);
  out.dr_to = static_cast<double>(out.n_to) / static_cast<double>(out.n_oe);
  if (latency_n > 0) out.latency = latency_sum / static_cast<double>(latency_n);
  return out;
}

void add_duplication_baseline(DetectionMatrix& m, double cost) {
  m.check();
  const DetectorColumn col{kDuplicationId, DetectorKind::kDuplication, cost};
  auto existing = m.column(kDuplicationId);
  if (!existing) {
    m.detectors.push_back(col);
    for (auto& r : m.rows) r.detections.emplace_back();
    existing = m.detectors.size() - 1;
  } else {
    m.detectors[*existing] = col;
  }
  for (auto& r : m.rows) {
    DetectionRecord d;
    if (r.fault_case == FaultCase::kCase1) {
      d.detected = true;
      d.cycle = r.cycle;
    }
    r.detections[*existing] = d;
  }
}

void AreaCoefficients::validate() const {
  for (double v : {place, transition, key_bit, pair, duplicated_bit, simple_event, counting_event}) {
    if (!(v >= 0)) throw ConfigError("area coefficients must be non-negative");
  }
}

double area_cost(const NetDefinition& def, const AreaCoefficients& k) {
  k.validate();
  if (def.events.empty()) throw ConfigError("net " + def.net.name() + " has no events");
  double cost = k.place * static_cast<double>(def.net.places().size()) +
                k.transition * static_cast<double>(def.net.transitions().size());
  for (const auto& e : def.events) {
    const bool counting = e.type == EventType::kNthChange || e.type == EventType::kNthChangeTo;
    cost += counting ? k.counting_event : k.simple_event;
  }
  return cost;
}

double area_cost(const SequenceTable& table, const AreaCoefficients& k) {
  k.validate();
  return k.key_bit * table.key_width + k.pair * static_cast<double>(table.pairs.size());
}

double duplication_cost(unsigned bits, const AreaCoefficients& k) {
  k.validate();
  return k.duplicated_bit * bits;
}

void annotate_costs(DetectionMatrix& m, const MonitorSet& monitors, const AreaCoefficients& k) {
  for (const auto& n : monitors.nets) {
    if (auto c = m.column(n->net.name())) m.detectors[*c].area_cost = area_cost(*n, k);
  }
  for (const auto& s : monitors.sequences) {
    if (auto c = m.column(s.name)) m.detectors[*c].area_cost = area_cost(*s.table, k);
  }
}

Selection select_detectors(const DetectionMatrix& m, SelectMode mode, double bound,
                           const std::vector<std::string>& exclude) {
  if (std::isnan(bound)) throw ConfigError("selection bound is not a number");
  const Problem p = make_problem(m, exclude);
  if (p.ids.empty()) throw ConfigError("no detectors to select from");
  Selection out;
  bool ex = true;
  Candidate best = search(p, mode, bound, ex);
  out.exhaustive = ex;
  out.max_dr = static_cast<double>(evaluate(p, [&] {
                                     std::vector<std::size_t> all(p.ids.size());
                                     for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
                                     return all;
                                   }())
                                       .n_tp) /
               static_cast<double>(p.n_oe);
  if (!best.valid) {
    out.feasible = false;
    // Cheapest subset reaching the best attainable rate.
    bool unused = true;
    best = search(p, SelectMode::kMinAreaUnderDr, out.max_dr, unused);
  }
  for (std::size_t d : best.members) out.subset.push_back(p.ids[d]);
  out.cost = best.cost;
  out.metrics = metrics(m, out.subset);
  return out;
}

std::vector<CurvePoint> tradeoff_curve(const DetectionMatrix& m, const std::vector<double>& budgets,
                                       const std::vector<std::string>& exclude) {
  if (!std::is_sorted(budgets.begin(), budgets.end())) throw ConfigError("budgets must be ascending");
  std::vector<CurvePoint> curve;
  for (double b : budgets) {
    const Selection s = select_detectors(m, SelectMode::kMaxDrUnderArea, b, exclude);
    CurvePoint pt{b, s.metrics.dr, s.metrics.dr_to, s.subset};
    if (!curve.empty() && curve.back().dr > pt.dr) {
      pt.dr = curve.back().dr;
      pt.dr_to = curve.back().dr_to;
      pt.subset = curve.back().subset;
    }
    curve.push_back(std::move(pt));
  }
  return curve;
}

std::vector<MetricsRow> report_rows(const DetectionMatrix& m) {
  std::vector<MetricsRow> rows;
  std::vector<std::string> all;
  for (const auto& d : m.detectors) {
    if (d.kind == DetectorKind::kDuplication) continue;
    rows.push_back({{d.id}, d.area_cost, metrics(m, {d.id})});
    all.push_back(d.id);
  }
  if (!all.empty()) {
    double cost = 0;
    for (const auto& d : m.detectors) {
      if (d.kind != DetectorKind::kDuplication) cost += d.area_cost;
    }
    rows.push_back({all, cost, metrics(m, all)});
  }
  for (const auto& d : m.detectors) {
    if (d.kind == DetectorKind::kDuplication) rows.push_back({{d.id}, d.area_cost, metrics(m, {d.id})});
  }
  return rows;
}

std::string join_ids(const std::vector<std::string>& ids) {
  std::string s;
  for (const auto& id : ids) {
    if (!s.empty()) s += '+';
    s += id;
  }
  return s;
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows,
                       const std::string& header_comment) {
  out << header_comment << "subset,cost,dr,dr_to,latency,n_oe,n_tp\n";
  for (const auto& r : rows) {
    out << join_ids(r.subset) << "," << format_number(r.cost) << "," << format_number(r.metrics.dr) << ","
        << format_number(r.metrics.dr_to) << ",";
    if (r.metrics.latency) out << format_number(*r.metrics.latency);
    out << "," << r.metrics.n_oe << "," << r.metrics.n_tp << "\n";
  }
}

void write_benign_csv(std::ostream& out, const std::vector<MetricsRow>& rows,
                      const std::string& header_comment) {
  out << header_comment << "subset,n_benign\n";
  for (const auto& r : rows) out << join_ids(r.subset) << "," << r.metrics.n_benign << "\n";
}

void write_tradeoff_csv(std::ostream& out, const std::vector<CurvePoint>& curve,
                        const std::string& header_comment) {
  out << header_comment << "budget,dr,dr_to,subset\n";
  for (const auto& p : curve) {
    out << format_number(p.budget) << "," << format_number(p.dr) << "," << format_number(p.dr_to) << ","
        << join_ids(p.subset) << "\n";
  }
}

}  // namespace ctlmon
