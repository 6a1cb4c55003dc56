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


// Internal helpers shared by the reference designs.

#ifndef CTLMON_SRC_DESIGNS_COMMON_HPP_
#define CTLMON_SRC_DESIGNS_COMMON_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ctlmon/designs.hpp"
#include "ctlmon/petri.hpp"

namespace ctlmon::designs {

// Small fluent builder for the bundled nets. Event calls bind to the most
// recently declared transition; events keep their call order.
class NetBuilder {
 public:
  explicit NetBuilder(std::string name) : name_(std::move(name)) {}

  NetBuilder& place(const std::string& name, std::uint32_t tokens = 0);
  NetBuilder& trans(const std::string& name, const std::vector<std::string>& in,
                    const std::vector<std::string>& out);
  NetBuilder& any(const std::string& signal);
  NetBuilder& to(const std::string& signal, u128 target);
  NetBuilder& nth(const std::string& signal, std::uint32_t index);
  NetBuilder& nth_to(const std::string& signal, u128 target, std::uint32_t index);
  NetBuilder& final_transition(const std::string& name);

  std::shared_ptr<const NetDefinition> build() const;

 private:
  struct PendingEvent {
    std::string transition;
    EventSpec spec;
  };
  NetBuilder& event(const std::string& signal, EventType type, std::optional<u128> target,
                    std::uint32_t index);

  std::string name_;
  std::vector<std::string> places_;
  std::vector<std::uint32_t> tokens_;
  std::vector<std::string> transitions_;
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> io_;
  std::vector<PendingEvent> events_;
  std::optional<std::string> final_;
};

// Splitmix64 step; used for deterministic default stimulus.
std::uint64_t splitmix64(std::uint64_t& state);

std::unique_ptr<Design> make_conv(const ConvStimulus& s);
std::unique_ptr<Design> make_gaus(const GausStimulus& s);
std::unique_ptr<Design> make_aes(const AesStimulus& s);
std::unique_ptr<Design> make_router(const NocStimulus& s);

MonitorBundle conv_bundle();
MonitorBundle gaus_bundle();
MonitorBundle aes_bundle();
MonitorBundle router_bundle();

OutputRecord conv_oracle(const ConvStimulus& s);
OutputRecord gaus_oracle(const GausStimulus& s);
OutputRecord aes_oracle(const AesStimulus& s);
OutputRecord router_oracle(const NocStimulus& s);

}  // namespace ctlmon::designs

#endif  // CTLMON_SRC_DESIGNS_COMMON_HPP_
