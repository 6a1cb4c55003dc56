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


// Campaign configuration file (INI).
//
//   [run]       design, stimulus (path, relative to the config file), seed,
//               out (output directory, relative to the config file)
//   [campaign]  case (1|2), injections_per_bit, injections, budget_multiplier,
//               window
//   [monitors]  nets (`builtin` or comma-separated net files),
//               presets (`builtin`, `none` or a list like `L3:1:end,L2:1:noend`)
//   [area]      a, b, c, d, e
//   [noc]       packets, flits_per_packet, unicast_latency, payload_seed
//   [report]    budgets (comma list, `inf` allowed), dr_target

#ifndef CTLMON_CONFIG_HPP_
#define CTLMON_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctlmon/analysis.hpp"
#include "ctlmon/designs.hpp"
#include "ctlmon/fault.hpp"

namespace ctlmon {

inline constexpr const char* kToolVersion = "0.1.0";

struct Config {
  std::filesystem::path path;  // the config file itself
  std::string digest;          // SHA-256 of its bytes, hex
  DesignId design = DesignId::kConv;
  std::optional<std::filesystem::path> stimulus;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  CampaignPlan plan;
  std::vector<std::filesystem::path> net_files;  // empty: bundled nets
  std::optional<std::vector<SelectorPreset>> presets;  // absent: bundled presets
  AreaCoefficients area;
  NocStimulus noc;
  std::vector<double> budgets;
  std::optional<double> dr_target;
};

// Throws IoError when the file cannot be read and ConfigError for bad or
// missing keys. The seed is mandatory.
Config load_config(const std::filesystem::path& path);
Config parse_config(std::string_view text, const std::filesystem::path& path);

std::string sha256_hex(std::string_view bytes);

// `L3:1:end` style preset list.
std::vector<SelectorPreset> parse_presets(std::string_view text);
// Comma list of numbers; `inf` is accepted.
std::vector<double> parse_number_list(std::string_view text);

// Stimulus for the configured design, loaded from the stimulus file or the
// [noc] section.
Stimulus load_stimulus(const Config& cfg);

}  // namespace ctlmon

#endif  // CTLMON_CONFIG_HPP_
