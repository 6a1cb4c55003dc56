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

#ifndef CTLMON_SIM_HPP_
#define CTLMON_SIM_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctlmon/design.hpp"

namespace ctlmon {

struct TraceRow {
  std::uint64_t cycle = 0;
  std::vector<BitVec> values;
  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct Trace {
  std::vector<SignalInfo> watched;
  std::vector<TraceRow> rows;
  std::optional<std::uint64_t> terminal_cycle;

  friend bool operator==(const Trace&, const Trace&) = default;
};

// Read-only observer. on_reset sees the power-on values (cycle 0); on_cycle
// sees post-edge values after every simulated cycle 1, 2, ...
class CycleHook {
 public:
  virtual ~CycleHook() = default;
  virtual void on_reset(const Design& design) { (void)design; }
  virtual void on_cycle(const Design& design, std::uint64_t cycle) = 0;
};

// Mutating actor used by fault injection. before_edge(c) runs just before
// the clock edge that produces cycle c; after_edge(c) runs right after it,
// before hooks observe cycle c. after_edge(0) runs after reset.
class Perturbation {
 public:
  virtual ~Perturbation() = default;
  virtual void before_edge(Design& design, std::uint64_t cycle) = 0;
  virtual void after_edge(Design& design, std::uint64_t cycle) = 0;
};

struct RunOptions {
  std::vector<std::string> watched;  // signal paths
  std::uint64_t cycle_budget = 0;
  bool record = true;  // false: rows are not stored (hooks still run)
};

// Resets the design, then steps until done() or the budget is spent.
// terminal_cycle is set iff done() was reached. Throws ConfigError for a
// zero budget or an unknown watched path.
Trace run(Design& design, const RunOptions& options, std::span<CycleHook* const> hooks = {},
          Perturbation* perturbation = nullptr);

struct GoldenRun {
  Trace trace;
  OutputRecord outputs;
  std::uint64_t cycles = 0;
};

// Fault-free run checked against `expected`. Throws DesignDefect when the
// design does not terminate within `cycle_budget` or its outputs differ.
GoldenRun run_golden(Design& design, const std::vector<std::string>& watched,
                     const OutputRecord& expected, std::uint64_t cycle_budget = 1'000'000);

// Re-keys one row by signal path. Throws InvariantViolation when the row
// does not match the watched list.
std::map<std::string, BitVec> snapshot(const Trace& trace, const TraceRow& row);

// CSV: header `cycle,<path>,...`, one row per cycle, lowercase hex values.
void write_trace_csv(std::ostream& out, const Trace& trace);

// All signal paths of a design, in declaration order.
std::vector<std::string> all_signal_paths(const Design& design);

}  // namespace ctlmon

#endif  // CTLMON_SIM_HPP_
