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


// The four tool commands. Each is a pure function of the config file and
// the artifacts already in the output directory.
//
//   golden    golden_trace.csv, golden_outputs.csv, nets.txt,
//             tables/<preset>.seqtable
//   campaign  matrix_case<N>.csv
//   report    <matrix>_metrics.csv, <matrix>_benign.csv, <matrix>_tradeoff.csv
//   select    <matrix>_selection.csv

#ifndef CTLMON_COMMANDS_HPP_
#define CTLMON_COMMANDS_HPP_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ctlmon/config.hpp"

namespace ctlmon {

struct CommandOptions {
  std::optional<std::filesystem::path> out_dir;  // overrides the config
  unsigned workers = 1;
  std::optional<std::vector<double>> budgets;    // overrides the config
  std::optional<double> dr_target;               // overrides the config
  std::vector<std::filesystem::path> matrices;   // report/select inputs
  std::function<void(std::size_t, std::size_t)> progress;
};

struct GoldenSummary {
  std::uint64_t cycles = 0;
  std::size_t output_words = 0;
  std::vector<std::string> tables;
};

struct SelectionRow {
  std::string mode;
  double bound = 0;
  Selection selection;
};

// `# ctlmon <version>`, `# config_digest <hex>`, `# seed <n>` lines.
std::string csv_header_comment(const Config& cfg);

std::filesystem::path output_dir(const Config& cfg, const CommandOptions& opts);
std::filesystem::path matrix_path(const Config& cfg, const CommandOptions& opts);

GoldenSummary cmd_golden(const Config& cfg, const CommandOptions& opts);
DetectionMatrix cmd_campaign(const Config& cfg, const CommandOptions& opts);
std::vector<std::vector<MetricsRow>> cmd_report(const Config& cfg, const CommandOptions& opts);
std::vector<SelectionRow> cmd_select(const Config& cfg, const CommandOptions& opts);

}  // namespace ctlmon

#endif  // CTLMON_COMMANDS_HPP_
