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


// Fault-injection campaigns.
//
// Case 1 XORs one control-register bit right after the clock edge of a
// chosen cycle. Case 2 replaces a group of primary control inputs with
// random values for a window of consecutive cycles. Every injection runs on
// a fresh design with fresh monitors and is classified against the golden
// run.

#ifndef CTLMON_FAULT_HPP_
#define CTLMON_FAULT_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ctlmon/designs.hpp"
#include "ctlmon/detector.hpp"
#include "ctlmon/petri.hpp"
#include "ctlmon/sequence.hpp"
#include "ctlmon/sim.hpp"

namespace ctlmon {

enum class FaultCase : int { kCase1 = 1, kCase2 = 2 };

struct Case1Fault {
  std::string reg;
  unsigned bit = 0;
  std::uint64_t cycle = 0;  // flipped after the edge producing this cycle
  friend bool operator==(const Case1Fault&, const Case1Fault&) = default;
};

struct Case2Fault {
  std::string group;                // common path prefix of `inputs`
  std::vector<std::string> inputs;
  std::uint64_t start_cycle = 1;    // first edge with forced inputs
  unsigned duration = 10;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;          // injection index, part of the RNG key
  friend bool operator==(const Case2Fault&, const Case2Fault&) = default;
};

struct FaultSpec {
  std::variant<Case1Fault, Case2Fault> fault;

  FaultCase fault_case() const { return fault.index() == 0 ? FaultCase::kCase1 : FaultCase::kCase2; }
  // Injection cycle (Case 1) or window start (Case 2).
  std::uint64_t reference_cycle() const;
  std::string target() const;
  std::string bit_or_window() const;
  std::string describe() const;
  friend bool operator==(const FaultSpec&, const FaultSpec&) = default;
};

enum class OutputClass { kCorrect, kSdc, kPremature, kTimeout };

std::string_view to_string(OutputClass c);
OutputClass parse_output_class(std::string_view s);

// Uniform value in [0, n) from the counter-based generator keyed by `key`.
std::uint64_t keyed_uniform(std::initializer_list<std::uint64_t> key, std::uint64_t n);

// injections_per_bit specs for every bit of every control register, cycles
// uniform in [0, golden_cycles). Throws ConfigError for zero per-bit count,
// zero golden cycles or a design without control registers.
std::vector<FaultSpec> enumerate_case1(const Design& design, unsigned injections_per_bit,
                                       std::uint64_t golden_cycles, std::uint64_t seed);

// Primary control inputs grouped by parent path, in declaration order.
std::vector<std::pair<std::string, std::vector<std::string>>> case2_groups(const Design& design);

// `count` windows, groups taken round-robin, starts uniform in
// [1, golden_cycles]. Throws ConfigError for a zero duration or a design
// without primary control inputs.
std::vector<FaultSpec> enumerate_case2(const Design& design, std::uint64_t count,
                                       std::uint64_t golden_cycles, std::uint64_t seed,
                                       unsigned duration = 10);

struct SequenceMonitor {
  std::string name;
  std::shared_ptr<const SequenceTable> table;
  bool check_end = true;
};

// The detectors of one campaign: bundled nets plus sequence tables learned
// from the golden trace.
struct MonitorSet {
  std::vector<std::shared_ptr<const NetDefinition>> nets;
  std::vector<SequenceMonitor> sequences;

  std::vector<std::string> ids() const;
  std::vector<DetectorKind> kinds() const;
  std::vector<std::unique_ptr<Detector>> instantiate() const;
};

// Learns a table per preset from `golden`, which must watch every signal of
// the preset levels.
MonitorSet learn_monitors(const Design& design, const MonitorBundle& bundle, const Trace& golden);

struct GoldenReference {
  std::uint64_t cycles = 0;
  OutputRecord outputs;
};

struct InjectionOutcome {
  std::uint64_t id = 0;
  FaultSpec fault;
  OutputClass output_class = OutputClass::kCorrect;
  std::uint64_t cycles_run = 0;
  std::vector<DetectionRecord> detections;  // in MonitorSet::ids() order
};

using DesignFactory = std::function<std::unique_ptr<Design>()>;

// Throws ConfigError for budget_multiplier < 1 or an invalid fault target.
InjectionOutcome run_injection(const DesignFactory& factory, const FaultSpec& fault,
                               const MonitorSet& monitors, const GoldenReference& golden,
                               double budget_multiplier, std::uint64_t id = 0);

struct CampaignPlan {
  FaultCase fault_case = FaultCase::kCase1;
  unsigned injections_per_bit = 10;  // Case 1
  std::uint64_t injections = 1000;   // Case 2
  std::uint64_t seed = 1;
  double budget_multiplier = 2.0;
  unsigned window = 10;              // Case 2
};

std::vector<FaultSpec> plan_faults(const Design& design, const CampaignPlan& plan,
                                   std::uint64_t golden_cycles);

struct DetectorColumn {
  std::string id;
  DetectorKind kind = DetectorKind::kPetri;
  double area_cost = 0;
  friend bool operator==(const DetectorColumn&, const DetectorColumn&) = default;
};

struct MatrixRow {
  std::uint64_t id = 0;
  FaultCase fault_case = FaultCase::kCase1;
  std::string target;
  std::string bit_or_window;
  std::uint64_t cycle = 0;
  OutputClass output_class = OutputClass::kCorrect;
  std::uint64_t cycles_run = 0;
  std::vector<DetectionRecord> detections;
  friend bool operator==(const MatrixRow&, const MatrixRow&) = default;
};

struct MatrixMeta {
  std::string version;
  std::string config_digest;
  std::uint64_t seed = 0;
  std::string design;
  int fault_case = 1;
  std::uint64_t golden_cycles = 0;
  unsigned control_register_bits = 0;
  friend bool operator==(const MatrixMeta&, const MatrixMeta&) = default;
};

struct DetectionMatrix {
  MatrixMeta meta;
  std::vector<DetectorColumn> detectors;
  std::vector<MatrixRow> rows;

  // Throws InvariantViolation when a row's detection count differs.
  void check() const;
  std::optional<std::size_t> column(std::string_view id) const;
  friend bool operator==(const DetectionMatrix&, const DetectionMatrix&) = default;
};

MatrixRow to_row(const InjectionOutcome& outcome);

// Runs every fault on `workers` threads. Rows are ordered by injection
// index, so the result does not depend on the worker count. `progress`, if
// set, is called with the number of finished injections.
DetectionMatrix campaign(const DesignFactory& factory, const std::vector<FaultSpec>& faults,
                         const MonitorSet& monitors, const GoldenReference& golden,
                         double budget_multiplier, unsigned workers = 1,
                         const std::function<void(std::size_t, std::size_t)>& progress = {});

// CSV with a `#` comment header carrying the meta data and detector columns:
//
//   # ctlmon <version>
//   # config_digest <hex>
//   # seed <n>
//   # design <id>
//   # case <1|2>
//   # golden_cycles <n>
//   # control_register_bits <n>
//   # detector <id> <petri|sequence|duplication> <cost>
//   inj_id,case,target,bit_or_window,cycle,output_class,cycles_run,det_<id>_flag,...
void write_matrix_csv(std::ostream& out, const DetectionMatrix& m);
// Throws ConfigError naming the line of a malformed row.
DetectionMatrix parse_matrix_csv(std::string_view text);

}  // namespace ctlmon

#endif  // CTLMON_FAULT_HPP_
