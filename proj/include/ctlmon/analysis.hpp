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


// Detection metrics, the register-duplication baseline, the abstract area
// model and detector subset selection.
//
// A row is an output error when its class is not `correct`. A subset
// detects a row when any of its detectors flagged it. The detection rate
// is detected errors over all errors; dr_to is the part of it detected only
// by end-of-run checks; latency is the mean distance from the fault's
// reference cycle to the first mid-run detection.

#ifndef CTLMON_ANALYSIS_HPP_
#define CTLMON_ANALYSIS_HPP_

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ctlmon/fault.hpp"
#include "ctlmon/petri.hpp"
#include "ctlmon/sequence.hpp"

namespace ctlmon {

struct Metrics {
  double dr = 0;
  double dr_to = 0;
  std::optional<double> latency;  // absent without mid-run detections
  std::uint64_t n_oe = 0;
  std::uint64_t n_tp = 0;
  std::uint64_t n_to = 0;         // detections by end-of-run checks only
  std::uint64_t n_benign = 0;     // correct rows that were flagged anyway
};

// Throws ConfigError for an unknown detector id and UndefinedMetric when
// the matrix has no output errors.
Metrics metrics(const DetectionMatrix& m, const std::vector<std::string>& subset);

inline constexpr const char* kDuplicationId = "duplication";

// Appends (or replaces) the duplication column: every Case-1 row detected
// at its injection cycle, no Case-2 row detected.
void add_duplication_baseline(DetectionMatrix& m, double cost);

struct AreaCoefficients {
  double place = 1;            // a
  double transition = 1;       // b
  double key_bit = 2;          // c
  double pair = 0.25;          // d
  double duplicated_bit = 2;   // e
  double simple_event = 1;     // types 1 and 2
  double counting_event = 3;   // types 3 and 4

  // Throws ConfigError for negative coefficients.
  void validate() const;
};

// Throws ConfigError for a net without events.
double area_cost(const NetDefinition& net, const AreaCoefficients& k = {});
double area_cost(const SequenceTable& table, const AreaCoefficients& k = {});
double duplication_cost(unsigned control_register_bits, const AreaCoefficients& k = {});

// Fills the cost of every monitor column from its definition.
void annotate_costs(DetectionMatrix& m, const MonitorSet& monitors, const AreaCoefficients& k = {});

enum class SelectMode { kMaxDrUnderArea, kMinAreaUnderDr };

struct Selection {
  std::vector<std::string> subset;  // sorted
  double cost = 0;
  Metrics metrics;
  bool feasible = true;
  double max_dr = 0;                // best dr over all detectors
  bool exhaustive = true;
};

// Exhaustive search up to 20 candidate detectors; beyond that a greedy pass
// by marginal detections per cost, refined exhaustively over the 20 best
// candidates. Ties prefer more detections, then lower cost, then the
// lexicographically smaller id list (area mode prefers lower cost first).
// `bound` is the area budget or the dr target. Columns in `exclude` are
// never chosen. Throws UndefinedMetric when the matrix has no errors.
Selection select_detectors(const DetectionMatrix& m, SelectMode mode, double bound,
                           const std::vector<std::string>& exclude = {kDuplicationId});

struct CurvePoint {
  double budget = 0;
  double dr = 0;
  double dr_to = 0;
  std::vector<std::string> subset;
};

// Throws ConfigError when budgets are not ascending.
std::vector<CurvePoint> tradeoff_curve(const DetectionMatrix& m, const std::vector<double>& budgets,
                                       const std::vector<std::string>& exclude = {kDuplicationId});

struct MetricsRow {
  std::vector<std::string> subset;
  double cost = 0;
  Metrics metrics;
};

// Per-detector rows, the union of all non-duplication detectors, then the
// duplication column when present.
std::vector<MetricsRow> report_rows(const DetectionMatrix& m);

// `subset,cost,dr,dr_to,latency,n_oe,n_tp`; ids joined with `+`.
void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows,
                       const std::string& header_comment);
// `subset,n_benign`
void write_benign_csv(std::ostream& out, const std::vector<MetricsRow>& rows,
                      const std::string& header_comment);
// `budget,dr,dr_to,subset`
void write_tradeoff_csv(std::ostream& out, const std::vector<CurvePoint>& curve,
                        const std::string& header_comment);

std::string join_ids(const std::vector<std::string>& ids);
std::string format_number(double v);

}  // namespace ctlmon

#endif  // CTLMON_ANALYSIS_HPP_
