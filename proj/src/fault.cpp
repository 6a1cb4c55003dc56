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


#include "ctlmon/fault.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "ctlmon/errors.hpp"

namespace ctlmon {
namespace {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t keyed_u64(std::initializer_list<std::uint64_t> key) {
  std::uint64_t h = 0x6a09e667f3bcc909ull;
  for (std::uint64_t k : key) h = mix64(h ^ k);
  return h;
}

std::string parent_path(const std::string& path) {
  const auto slash = path.rfind('/');
  return slash == std::string::npos ? std::string() : path.substr(0, slash);
}

class Case1Perturbation final : public Perturbation {
 public:
  Case1Perturbation(SignalId id, unsigned bit, std::uint64_t cycle) : id_(id), bit_(bit), cycle_(cycle) {}
  void before_edge(Design&, std::uint64_t) override {}
  void after_edge(Design& design, std::uint64_t cycle) override {
    if (cycle == cycle_) design.flip_register_bit(id_, bit_);
  }

 private:
  SignalId id_;
  unsigned bit_;
  std::uint64_t cycle_;
};

class Case2Perturbation final : public Perturbation {
 public:
  Case2Perturbation(std::vector<SignalId> ids, const Case2Fault& f) : ids_(std::move(ids)), f_(f) {}
  void before_edge(Design& design, std::uint64_t cycle) override {
    if (cycle >= f_.start_cycle && cycle < f_.start_cycle + f_.duration) {
      for (std::size_t j = 0; j < ids_.size(); ++j) {
        const unsigned w = design.signals()[ids_[j]].width;
        const u128 v = (static_cast<u128>(keyed_u64({f_.seed, f_.index, cycle, j, 1})) << 64) |
                       keyed_u64({f_.seed, f_.index, cycle, j, 0});
        design.force_input(ids_[j], BitVec(w, v & width_mask(w)), true);
      }
    } else if (cycle == f_.start_cycle + f_.duration) {
      design.release_all_forces();
    }
  }
  void after_edge(Design&, std::uint64_t) override {}

 private:
  std::vector<SignalId> ids_;
  Case2Fault f_;
};

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

template <typename T>
bool parse_num(std::string_view s, T& out) {
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

std::string format_cost(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::uint64_t keyed_uniform(std::initializer_list<std::uint64_t> key, std::uint64_t n) {
  if (n == 0) throw ContractViolation("keyed_uniform over an empty range");
  return static_cast<std::uint64_t>((static_cast<u128>(keyed_u64(key)) * n) >> 64);
}

std::uint64_t FaultSpec::reference_cycle() const {
  if (const auto* c1 = std::get_if<Case1Fault>(&fault)) return c1->cycle;
  return std::get<Case2Fault>(fault).start_cycle;
}

std::string FaultSpec::target() const {
  if (const auto* c1 = std::get_if<Case1Fault>(&fault)) return c1->reg;
  return std::get<Case2Fault>(fault).group;
}

std::string FaultSpec::bit_or_window() const {
  if (const auto* c1 = std::get_if<Case1Fault>(&fault)) return std::to_string(c1->bit);
  return std::to_string(std::get<Case2Fault>(fault).duration);
}

std::string FaultSpec::describe() const {
  if (const auto* c1 = std::get_if<Case1Fault>(&fault)) {
    return "case1 " + c1->reg + " bit " + std::to_string(c1->bit) + " cycle " + std::to_string(c1->cycle);
  }
  const auto& c2 = std::get<Case2Fault>(fault);
  return "case2 " + c2.group + " start " + std::to_string(c2.start_cycle) + " duration " +
         std::to_string(c2.duration) + " index " + std::to_string(c2.index);
}

std::string_view to_string(OutputClass c) {
  switch (c) {
    case OutputClass::kCorrect: return "correct";
    case OutputClass::kSdc: return "sdc";
    case OutputClass::kPremature: return "premature";
    case OutputClass::kTimeout: return "timeout";
  }
  return "?";
}

OutputClass parse_output_class(std::string_view s) {
  if (s == "correct") return OutputClass::kCorrect;
  if (s == "sdc") return OutputClass::kSdc;
  if (s == "premature") return OutputClass::kPremature;
  if (s == "timeout") return OutputClass::kTimeout;
  throw ConfigError("unknown output class '" + std::string(s) + "'");
}

std::vector<FaultSpec> enumerate_case1(const Design& design, unsigned injections_per_bit,
                                       std::uint64_t golden_cycles, std::uint64_t seed) {
  if (injections_per_bit < 1) throw ConfigError("injections_per_bit must be at least 1");
  if (golden_cycles == 0) throw ConfigError("golden run has no cycles");
  if (design.control_registers().empty()) throw ConfigError("design has no control registers");
  std::vector<FaultSpec> out;
  for (SignalId id : design.control_registers()) {
    const SignalInfo& s = design.signals()[id];
    for (unsigned bit = 0; bit < s.width; ++bit) {
      for (unsigned k = 0; k < injections_per_bit; ++k) {
        const std::uint64_t cycle = keyed_uniform({seed, 1, id, bit, k}, golden_cycles);
        out.push_back(FaultSpec{Case1Fault{s.path, bit, cycle}});
      }
    }
  }
  return out;
}

std::vector<std::pair<std::string, std::vector<std::string>>> case2_groups(const Design& design) {
  std::vector<std::pair<std::string, std::vector<std::string>>> groups;
  for (SignalId id : design.primary_control_inputs()) {
    const std::string& path = design.signals()[id].path;
    const std::string parent = parent_path(path);
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == parent; });
    if (it == groups.end()) {
      groups.push_back({parent, {path}});
    } else {
      it->second.push_back(path);
    }
  }
  return groups;
}

std::vector<FaultSpec> enumerate_case2(const Design& design, std::uint64_t count,
                                       std::uint64_t golden_cycles, std::uint64_t seed,
                                       unsigned duration) {
  if (duration == 0) throw ConfigError("case 2 window must be at least one cycle");
  if (golden_cycles == 0) throw ConfigError("golden run has no cycles");
  const auto groups = case2_groups(design);
  if (groups.empty()) throw ConfigError("design has no primary control inputs");
  std::vector<FaultSpec> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto& g = groups[i % groups.size()];
    const std::uint64_t start = 1 + keyed_uniform({seed, 2, i}, golden_cycles);
    out.push_back(FaultSpec{Case2Fault{g.first, g.second, start, duration, seed, i}});
  }
  return out;
}

std::vector<std::string> MonitorSet::ids() const {
  std::vector<std::string> out;
  for (const auto& n : nets) out.push_back(n->net.name());
  for (const auto& s : sequences) out.push_back(s.name);
  return out;
}

std::vector<DetectorKind> MonitorSet::kinds() const {
  std::vector<DetectorKind> out(nets.size(), DetectorKind::kPetri);
  out.insert(out.end(), sequences.size(), DetectorKind::kSequence);
  return out;
}

std::vector<std::unique_ptr<Detector>> MonitorSet::instantiate() const {
  std::vector<std::unique_ptr<Detector>> out;
  for (const auto& n : nets) out.push_back(std::make_unique<PetriDetector>(n));
  for (const auto& s : sequences) {
    out.push_back(std::make_unique<SequenceDetector>(s.name, s.table, s.check_end));
  }
  return out;
}

MonitorSet learn_monitors(const Design& design, const MonitorBundle& bundle, const Trace& golden) {
  MonitorSet set;
  set.nets = bundle.nets;
  std::optional<std::map<std::string, BitRange>> ranges;
  for (const auto& p : bundle.presets) {
    if (p.bit_type == BitType::kUsedMsb && !ranges) ranges = used_ranges_from_trace(golden);
    const BitSelector sel = select_bits(design, p.level, p.bit_type, ranges ? &*ranges : nullptr);
    set.sequences.push_back(
        {p.name(), std::make_shared<const SequenceTable>(acq_normal_seq(golden, sel)), p.check_end});
  }
  return set;
}

InjectionOutcome run_injection(const DesignFactory& factory, const FaultSpec& fault,
                               const MonitorSet& monitors, const GoldenReference& golden,
                               double budget_multiplier, std::uint64_t id) {
  if (!(budget_multiplier >= 1.0)) throw ConfigError("budget_multiplier must be at least 1");
  std::unique_ptr<Design> design = factory();

  std::unique_ptr<Perturbation> perturbation;
  if (const auto* c1 = std::get_if<Case1Fault>(&fault.fault)) {
    const SignalId sid = design->require(c1->reg);
    const SignalInfo& s = design->signals()[sid];
    if (s.kind != SignalKind::kRegister || s.cls != SignalClass::kControl) {
      throw ConfigError(c1->reg + " is not a control register");
    }
    if (c1->bit >= s.width) throw ConfigError("bit out of range for " + c1->reg);
    perturbation = std::make_unique<Case1Perturbation>(sid, c1->bit, c1->cycle);
  } else {
    const auto& c2 = std::get<Case2Fault>(fault.fault);
    std::vector<SignalId> ids;
    for (const auto& p : c2.inputs) ids.push_back(design->require(p));
    perturbation = std::make_unique<Case2Perturbation>(std::move(ids), c2);
  }

  auto detectors = monitors.instantiate();
  std::vector<CycleHook*> hooks;
  for (auto& d : detectors) hooks.push_back(d.get());

  RunOptions opts;
  opts.cycle_budget = static_cast<std::uint64_t>(
      std::ceil(budget_multiplier * static_cast<double>(golden.cycles)));
  opts.record = false;
  const Trace t = run(*design, opts, hooks, perturbation.get());

  InjectionOutcome out;
  out.id = id;
  out.fault = fault;
  out.cycles_run = t.terminal_cycle ? *t.terminal_cycle : opts.cycle_budget;
  if (!t.terminal_cycle) {
    out.output_class = OutputClass::kTimeout;
  } else if (design->outputs() == golden.outputs) {
    out.output_class = OutputClass::kCorrect;
  } else if (*t.terminal_cycle < golden.cycles) {
    out.output_class = OutputClass::kPremature;
  } else {
    out.output_class = OutputClass::kSdc;
  }
  for (auto& d : detectors) {
    d->finalize(out.cycles_run);
    out.detections.push_back(d->record());
  }
  return out;
}

std::vector<FaultSpec> plan_faults(const Design& design, const CampaignPlan& plan,
                                   std::uint64_t golden_cycles) {
  if (plan.fault_case == FaultCase::kCase1) {
    return enumerate_case1(design, plan.injections_per_bit, golden_cycles, plan.seed);
  }
  return enumerate_case2(design, plan.injections, golden_cycles, plan.seed, plan.window);
}

void DetectionMatrix::check() const {
  for (const auto& r : rows) {
    if (r.detections.size() != detectors.size()) {
      throw InvariantViolation("matrix row " + std::to_string(r.id) + " has " +
                               std::to_string(r.detections.size()) + " detections for " +
                               std::to_string(detectors.size()) + " detectors");
    }
  }
}

std::optional<std::size_t> DetectionMatrix::column(std::string_view id) const {
  for (std::size_t i = 0; i < detectors.size(); ++i) {
    if (detectors[i].id == id) return i;
  }
  return std::nullopt;
}

MatrixRow to_row(const InjectionOutcome& o) {
  return MatrixRow{o.id,
                   o.fault.fault_case(),
                   o.fault.target(),
                   o.fault.bit_or_window(),
                   o.fault.reference_cycle(),
                   o.output_class,
                   o.cycles_run,
                   o.detections};
}

DetectionMatrix campaign(const DesignFactory& factory, const std::vector<FaultSpec>& faults,
                         const MonitorSet& monitors, const GoldenReference& golden,
                         double budget_multiplier, unsigned workers,
                         const std::function<void(std::size_t, std::size_t)>& progress) {
  if (!(budget_multiplier >= 1.0)) throw ConfigError("budget_multiplier must be at least 1");
  DetectionMatrix m;
  const auto ids = monitors.ids();
  const auto kinds = monitors.kinds();
  for (std::size_t i = 0; i < ids.size(); ++i) m.detectors.push_back({ids[i], kinds[i], 0});
  m.rows.resize(faults.size());

  std::atomic<std::size_t> next{0}, finished{0};
  std::mutex err_mu;
  std::exception_ptr error;
  std::size_t error_index = faults.size();
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= faults.size()) return;
      try {
        m.rows[i] = to_row(run_injection(factory, faults[i], monitors, golden, budget_multiplier, i));
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
        next.store(faults.size());
        return;
      }
      const std::size_t done = finished.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard lock(err_mu);
        progress(done, faults.size());
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(faults.size())));
  std::vector<std::thread> threads;
  for (unsigned w = 1; w < n; ++w) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (error) {
    try {
      std::rethrow_exception(error);
    } catch (const ConfigError& e) {
      throw ConfigError(faults[error_index].describe() + ": " + e.what());
    } catch (const std::exception& e) {
      throw DesignDefect(faults[error_index].describe() + ": " + e.what());
    }
  }
  return m;
}

void write_matrix_csv(std::ostream& out, const DetectionMatrix& m) {
  m.check();
  out << "# ctlmon " << m.meta.version << "\n";
  out << "# config_digest " << m.meta.config_digest << "\n";
  out << "# seed " << m.meta.seed << "\n";
  out << "# design " << m.meta.design << "\n";
  out << "# case " << m.meta.fault_case << "\n";
  out << "# golden_cycles " << m.meta.golden_cycles << "\n";
  out << "# control_register_bits " << m.meta.control_register_bits << "\n";
  for (const auto& d : m.detectors) {
    out << "# detector " << d.id << " " << to_string(d.kind) << " " << format_cost(d.area_cost) << "\n";
  }
  out << "inj_id,case,target,bit_or_window,cycle,output_class,cycles_run";
  for (const auto& d : m.detectors) out << ",det_" << d.id << "_flag,det_" << d.id << "_cycle,det_" << d.id << "_final";
  out << "\n";
  for (const auto& r : m.rows) {
    out << r.id << "," << static_cast<int>(r.fault_case) << "," << r.target << "," << r.bit_or_window << ","
        << r.cycle << "," << to_string(r.output_class) << "," << r.cycles_run;
    for (const auto& d : r.detections) {
      out << "," << (d.detected ? 1 : 0) << ",";
      if (d.cycle) out << *d.cycle;
      out << "," << (d.via_final ? 1 : 0);
    }
    out << "\n";
  }
}

DetectionMatrix parse_matrix_csv(std::string_view text) {
  DetectionMatrix m;
  bool header_seen = false;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) -> ConfigError {
    return ConfigError("matrix line " + std::to_string(line_no) + ": " + msg);
  };
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream is{std::string(line.substr(1))};
      std::string key;
      is >> key;
      // String fields may be empty.
      auto rest = [&is] {
        std::string v;
        std::getline(is >> std::ws, v);
        is.clear();
        return v;
      };
      if (key == "ctlmon") {
        m.meta.version = rest();
      } else if (key == "config_digest") {
        m.meta.config_digest = rest();
      } else if (key == "seed") {
        is >> m.meta.seed;
      } else if (key == "design") {
        m.meta.design = rest();
      } else if (key == "case") {
        is >> m.meta.fault_case;
      } else if (key == "golden_cycles") {
        is >> m.meta.golden_cycles;
      } else if (key == "control_register_bits") {
        is >> m.meta.control_register_bits;
      } else if (key == "detector") {
        std::string id, kind;
        double cost = 0;
        if (!(is >> id >> kind >> cost)) throw fail("bad detector line");
        m.detectors.push_back({id, parse_detector_kind(kind), cost});
      }
      if (is.fail()) throw fail("bad header value for '" + key + "'");
      continue;
    }
    const auto f = split(line, ',');
    if (!header_seen) {
      if (f.size() != 7 + 3 * m.detectors.size() || f[0] != "inj_id") {
        throw fail("column header does not match the detector list");
      }
      for (std::size_t i = 0; i < m.detectors.size(); ++i) {
        if (f[7 + 3 * i] != "det_" + m.detectors[i].id + "_flag") throw fail("unexpected column " + std::string(f[7 + 3 * i]));
      }
      header_seen = true;
      continue;
    }
    if (f.size() != 7 + 3 * m.detectors.size()) throw fail("wrong field count");
    MatrixRow r;
    int c = 0;
    if (!parse_num(f[0], r.id) || !parse_num(f[1], c) || (c != 1 && c != 2) || !parse_num(f[4], r.cycle) ||
        !parse_num(f[6], r.cycles_run)) {
      throw fail("bad numeric field");
    }
    r.fault_case = static_cast<FaultCase>(c);
    r.target = std::string(f[2]);
    r.bit_or_window = std::string(f[3]);
    try {
      r.output_class = parse_output_class(f[5]);
    } catch (const ConfigError& e) {
      throw fail(e.what());
    }
    for (std::size_t i = 0; i < m.detectors.size(); ++i) {
      DetectionRecord d;
      const auto flag = f[7 + 3 * i], cyc = f[8 + 3 * i], fin = f[9 + 3 * i];
      if ((flag != "0" && flag != "1") || (fin != "0" && fin != "1")) throw fail("bad detection flag");
      d.detected = flag == "1";
      d.via_final = fin == "1";
      if (!cyc.empty()) {
        std::uint64_t v = 0;
        if (!parse_num(cyc, v)) throw fail("bad detection cycle");
        d.cycle = v;
      }
      r.detections.push_back(d);
    }
    m.rows.push_back(std::move(r));
  }
  if (!header_seen) throw ConfigError("matrix has no column header");
  return m;
}

}  // namespace ctlmon
