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


// A tiny design for kernel tests: a 3-bit counter that runs while `en` is
// high and finishes when it has counted to `limit`.

#ifndef CTLMON_TESTS_TOY_DESIGN_HPP_
#define CTLMON_TESTS_TOY_DESIGN_HPP_

#include "ctlmon/design.hpp"

namespace ctlmon::testing {

class ToyCounter final : public Design {
 public:
  explicit ToyCounter(unsigned limit = 5) : limit_(limit) {
    en_ = add_primary_control_input("toy/en", 1);
    ctr_ = add_control_register("toy/ctr", 3);
    phase_ = add_control_register("toy/phase", 1);
    busy_ = add_signal("toy/busy", 1, SignalKind::kPrimaryOutput, SignalClass::kControl);
    data_ = add_signal("toy/acc", 8, SignalKind::kRegister, SignalClass::kData);
    reset();
  }

  DesignId id() const override { return DesignId::kConv; }

  void reset() override {
    clear_all_values();
    finished_ = false;
    update_outputs();
  }

  void step() override {
    drive(en_, 1);
    if (finished_) return;
    if (get(en_)) {
      set(ctr_, get(ctr_) + 1);
      set(phase_, get(phase_) ^ 1);
      set(data_, get(data_) + get(ctr_));
    }
    if (get(ctr_) >= limit_) finished_ = true;
    update_outputs();
  }

  bool done() const override { return finished_; }
  OutputRecord outputs() const override {
    return {{static_cast<std::int64_t>(get(ctr_)), static_cast<std::int64_t>(get(data_))}};
  }

 protected:
  void update_outputs() override { set(busy_, get(ctr_) != 0 && !finished_); }

 private:
  unsigned limit_;
  bool finished_ = false;
  SignalId en_, ctr_, phase_, busy_, data_;
};

}  // namespace ctlmon::testing

#endif  // CTLMON_TESTS_TOY_DESIGN_HPP_
