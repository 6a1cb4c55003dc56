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

#ifndef CTLMON_DETECTOR_HPP_
#define CTLMON_DETECTOR_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "ctlmon/sim.hpp"

namespace ctlmon {

enum class DetectorKind { kPetri, kSequence, kDuplication };

std::string_view to_string(DetectorKind kind);
DetectorKind parse_detector_kind(std::string_view s);

struct DetectionRecord {
  bool detected = false;
  std::optional<std::uint64_t> cycle;
  bool via_final = false;  // raised only by the end-of-run check
  friend bool operator==(const DetectionRecord&, const DetectionRecord&) = default;
};

// An online error detector. on_reset clears all state, so one instance can
// be reused for consecutive simulations.
class Detector : public CycleHook {
 public:
  virtual const std::string& name() const = 0;
  virtual DetectorKind kind() const = 0;
  // Called once after the simulation stops (done or budget).
  virtual void finalize(std::uint64_t end_cycle) = 0;
  virtual DetectionRecord record() const = 0;
};

}  // namespace ctlmon

#endif  // CTLMON_DETECTOR_HPP_
