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

#include "ctlmon/sim.hpp"

#include <ostream>

#include "ctlmon/errors.hpp"

namespace ctlmon {

Trace run(Design& design, const RunOptions& options, std::span<CycleHook* const> hooks,
          Perturbation* perturbation) {
  if (options.cycle_budget < 1) throw ConfigError("cycle budget must be at least 1");

  Trace trace;
  std::vector<SignalId> watched;
  watched.reserve(options.watched.size());
  for (const auto& path : options.watched) {
    const SignalId id = design.require(path);
    watched.push_back(id);
    trace.watched.push_back(design.signals()[id]);
  }

  design.reset();
  for (CycleHook* hook : hooks) hook->on_reset(design);
  if (perturbation != nullptr) perturbation->after_edge(design, 0);

  for (std::uint64_t cycle = 1; cycle <= options.cycle_budget; ++cycle) {
    if (perturbation != nullptr) perturbation->before_edge(design, cycle);
    design.step();
    if (perturbation != nullptr) perturbation->after_edge(design, cycle);
    if (options.record) {
      TraceRow row;
      row.cycle = cycle;
      row.values.reserve(watched.size());
      for (SignalId id : watched) row.values.push_back(design.read(id));
      trace.rows.push_back(std::move(row));
    }
    for (CycleHook* hook : hooks) hook->on_cycle(design, cycle);
    if (design.done()) {
      trace.terminal_cycle = cycle;
      break;
    }
  }
  return trace;
}

GoldenRun run_golden(Design& design, const std::vector<std::string>& watched,
                     const OutputRecord& expected, std::uint64_t cycle_budget) {
  GoldenRun golden;
  golden.trace = run(design, RunOptions{watched, cycle_budget, true});
  if (!golden.trace.terminal_cycle) {
    throw DesignDefect("design " + std::string(to_string(design.id())) +
                       " did not finish its fault-free run within " +
                       std::to_string(cycle_budget) + " cycles");
  }
  golden.cycles = *golden.trace.terminal_cycle;
  golden.outputs = design.outputs();
  if (!(golden.outputs == expected)) {
    throw DesignDefect("design " + std::string(to_string(design.id())) +
                       " fault-free outputs differ from the functional oracle");
  }
  return golden;
}

std::map<std::string, BitVec> snapshot(const Trace& trace, const TraceRow& row) {
  if (row.values.size() != trace.watched.size()) {
    throw InvariantViolation("trace row at cycle " + std::to_string(row.cycle) + " has " +
                             std::to_string(row.values.size()) + " values for " +
                             std::to_string(trace.watched.size()) + " watched signals");
  }
  std::map<std::string, BitVec> out;
  for (std::size_t i = 0; i < row.values.size(); ++i) {
    out.emplace(trace.watched[i].path, row.values[i]);
  }
  return out;
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << "cycle";
  for (const auto& s : trace.watched) out << ',' << s.path;
  out << '\n';
  for (const auto& row : trace.rows) {
    out << row.cycle;
    for (const auto& v : row.values) out << ',' << v.to_hex();
    out << '\n';
  }
}

std::vector<std::string> all_signal_paths(const Design& design) {
  std::vector<std::string> paths;
  paths.reserve(design.signals().size());
  for (const auto& s : design.signals()) paths.push_back(s.path);
  return paths;
}

}  // namespace ctlmon
