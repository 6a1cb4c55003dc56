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


// The four bundled reference designs, their stimulus, functional oracles
// and monitor bundles.

#ifndef CTLMON_DESIGNS_HPP_
#define CTLMON_DESIGNS_HPP_

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ctlmon/design.hpp"
#include "ctlmon/petri.hpp"
#include "ctlmon/sequence.hpp"

namespace ctlmon {

inline constexpr int kConvSize = 8;      // input is kConvSize x kConvSize
inline constexpr int kConvKernels = 4;   // output channels, 3x3 each
inline constexpr int kConvOut = kConvSize - 2;
inline constexpr int kGausWidth = 16;
inline constexpr int kGausHeight = 12;
inline constexpr int kAesBlocks = 5;
inline constexpr int kMeshSize = 4;

struct ConvStimulus {
  std::array<std::int8_t, kConvSize * kConvSize> act{};  // row-major
  // weights[k * 9 + i * 3 + j] for output channel k, kernel row i, col j.
  std::array<std::int8_t, kConvKernels * 9> weights{};
};

struct GausStimulus {
  std::array<std::uint8_t, kGausWidth * kGausHeight> pixels{};  // row-major
};

struct AesStimulus {
  std::array<std::uint8_t, 16> key{};
  std::array<std::array<std::uint8_t, 16>, kAesBlocks> plaintexts{};
};

struct NocStimulus {
  unsigned packets = 8;
  unsigned flits_per_packet = 9;   // head + body + tail
  unsigned unicast_latency = 64;   // cycles after a node has its multicast data
  std::uint64_t payload_seed = 1;
};

using Stimulus = std::variant<ConvStimulus, GausStimulus, AesStimulus, NocStimulus>;

DesignId design_of(const Stimulus& s);
Stimulus default_stimulus(DesignId id);

// Hex CSV stimulus files. Every non-comment line is `<tag>,<hex>,...`:
//   conv: `act,<8 bytes>` per input row, then `weight,<9 bytes>` per
//         output channel (two's complement bytes)
//   gaus: `pix,<16 bytes>` per image row
//   aes:  `key,<32 hex digits>` then `pt,<32 hex digits>` per block
// The router scenario is configured by a config section instead.
// Throws ConfigError with a line number.
Stimulus parse_stimulus(DesignId id, std::string_view text);
std::string serialize_stimulus(const Stimulus& s);

// Pure functional reference of the design's output record.
OutputRecord oracle_output(const Stimulus& s);

std::unique_ptr<Design> make_design(const Stimulus& s);

// A level/bit-type selector preset for the sequence monitor.
struct SelectorPreset {
  int level = 3;
  BitType bit_type = BitType::kAllBits;
  bool check_end = true;

  // "seq_L3_1"
  std::string name() const;
  friend bool operator==(const SelectorPreset&, const SelectorPreset&) = default;
};

struct MonitorBundle {
  std::vector<std::shared_ptr<const NetDefinition>> nets;
  std::vector<SelectorPreset> presets;
};

MonitorBundle monitor_bundle(DesignId id);

struct DesignBuild {
  std::unique_ptr<Design> design;
  MonitorBundle bundle;
};

DesignBuild build_conv(const ConvStimulus& s = std::get<ConvStimulus>(default_stimulus(DesignId::kConv)));
DesignBuild build_gaus(const GausStimulus& s = std::get<GausStimulus>(default_stimulus(DesignId::kGaus)));
DesignBuild build_aes(const AesStimulus& s = std::get<AesStimulus>(default_stimulus(DesignId::kAes)));
DesignBuild build_router_scenario(
    const NocStimulus& s = std::get<NocStimulus>(default_stimulus(DesignId::kRouter)));
DesignBuild build(const Stimulus& s);

}  // namespace ctlmon

#endif  // CTLMON_DESIGNS_HPP_
