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


#include <gtest/gtest.h>

#include <sstream>

#include "ctlmon/bitvec.hpp"
#include "ctlmon/errors.hpp"
#include "ctlmon/sim.hpp"
#include "toy_design.hpp"

namespace ctlmon {
namespace {

using testing::ToyCounter;

TEST(BitVec, MasksToWidth) {
  EXPECT_EQ(BitVec(4, 0x1f).value(), 0xfu);
  EXPECT_EQ(BitVec(128, ~u128{0}).value(), ~u128{0});
  EXPECT_THROW(BitVec(0, 0), ConfigError);
  EXPECT_THROW(BitVec(129, 0), ConfigError);
}

TEST(BitVec, HexRoundTrip) {
  const BitVec v(72, (u128{0xab} << 64) | 0x0123456789abcdefull);
  EXPECT_EQ(v.to_hex(), "ab0123456789abcdef");
  EXPECT_EQ(BitVec::from_hex(72, v.to_hex()), v);
  EXPECT_EQ(BitVec::from_hex(8, "0x1F").value(), 0x1fu);
  EXPECT_THROW(BitVec::from_hex(4, "1f"), ConfigError);
  EXPECT_THROW(BitVec::from_hex(8, "g1"), ConfigError);
}

TEST(BitVec, FlipAndBit) {
  const BitVec v(3, 0b101);
  EXPECT_TRUE(v.bit(0));
  EXPECT_FALSE(v.bit(1));
  EXPECT_FALSE(v.bit(7));
  EXPECT_EQ(v.flipped(1).value(), 0b111u);
}

TEST(Design, LevelsAndTargets) {
  ToyCounter d;
  EXPECT_EQ(d.control_registers().size(), 2u);
  EXPECT_EQ(d.control_register_bits(), 4u);
  EXPECT_EQ(d.primary_control_inputs().size(), 1u);
  EXPECT_EQ(d.level_signals(1).size(), 1u);
  EXPECT_TRUE(d.level_signals(2).empty());
  EXPECT_THROW(d.require("toy/nope"), ConfigError);
}

TEST(Design, FlipOnlyRegisters) {
  ToyCounter d;
  EXPECT_THROW(d.flip_register_bit(d.require("toy/busy"), 0), ConfigError);
  EXPECT_THROW(d.flip_register_bit(d.require("toy/ctr"), 3), ConfigError);
  d.flip_register_bit(d.require("toy/ctr"), 1);
  EXPECT_EQ(d.read(d.require("toy/ctr")).value(), 2u);
  EXPECT_EQ(d.read(d.require("toy/busy")).value(), 1u);  // recomputed
}

TEST(Design, ForcedInputOverridesDrive) {
  ToyCounter d;
  const SignalId en = d.require("toy/en");
  EXPECT_THROW(d.force_input(d.require("toy/ctr"), BitVec(3, 0), true), ConfigError);
  d.force_input(en, BitVec(1, 0), true);
  d.step();
  d.step();
  EXPECT_EQ(d.read(d.require("toy/ctr")).value(), 0u);
  d.release_all_forces();
  d.step();
  EXPECT_EQ(d.read(d.require("toy/ctr")).value(), 1u);
}

TEST(Sim, RunStopsAtDone) {
  ToyCounter d(5);
  const Trace t = run(d, RunOptions{{"toy/ctr", "toy/busy"}, 100, true});
  ASSERT_TRUE(t.terminal_cycle);
  EXPECT_EQ(*t.terminal_cycle, 5u);
  ASSERT_EQ(t.rows.size(), 5u);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    EXPECT_EQ(t.rows[i].cycle, i + 1);
    EXPECT_EQ(t.rows[i].values[0].value(), i + 1);
  }
}

TEST(Sim, BudgetExhaustedLeavesNoTerminal) {
  ToyCounter d(7);
  const Trace t = run(d, RunOptions{{"toy/ctr"}, 3, true});
  EXPECT_FALSE(t.terminal_cycle);
  EXPECT_EQ(t.rows.size(), 3u);
}

TEST(Sim, ZeroBudgetAndUnknownWatch) {
  ToyCounter d;
  EXPECT_THROW(run(d, RunOptions{{"toy/ctr"}, 0, true}), ConfigError);
  EXPECT_THROW(run(d, RunOptions{{"toy/missing"}, 10, true}), ConfigError);
}

TEST(Sim, Deterministic) {
  ToyCounter a, b;
  const auto paths = all_signal_paths(a);
  EXPECT_EQ(run(a, RunOptions{paths, 50, true}), run(b, RunOptions{paths, 50, true}));
  EXPECT_EQ(run(a, RunOptions{paths, 50, true}), run(a, RunOptions{paths, 50, true}));
}

TEST(Sim, GoldenChecksOracle) {
  ToyCounter d(5);
  const OutputRecord good{{5, 15}};  // 1+2+3+4+5
  const GoldenRun g = run_golden(d, {"toy/ctr"}, good);
  EXPECT_EQ(g.cycles, 5u);
  EXPECT_EQ(g.outputs, good);
  EXPECT_THROW(run_golden(d, {"toy/ctr"}, OutputRecord{{5, 14}}), DesignDefect);
  ToyCounter never(9);  // a 3-bit counter cannot reach 9
  EXPECT_THROW(run_golden(never, {"toy/ctr"}, good, 100), DesignDefect);
}

TEST(Sim, TraceCsv) {
  ToyCounter d(2);
  const Trace t = run(d, RunOptions{{"toy/ctr", "toy/busy"}, 10, true});
  std::ostringstream os;
  write_trace_csv(os, t);
  EXPECT_EQ(os.str(), "cycle,toy/ctr,toy/busy\n1,1,1\n2,2,0\n");
}

TEST(Sim, SnapshotByPath) {
  ToyCounter d(2);
  const Trace t = run(d, RunOptions{{"toy/ctr"}, 10, true});
  const auto snap = snapshot(t, t.rows[1]);
  EXPECT_EQ(snap.at("toy/ctr").value(), 2u);
}

}  // namespace
}  // namespace ctlmon
