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

#include <set>
#include <sstream>

#include "ctlmon/analysis.hpp"
#include "ctlmon/designs.hpp"
#include "ctlmon/errors.hpp"
#include "ctlmon/fault.hpp"

namespace ctlmon {
namespace {

struct Fixture {
  Stimulus stim;
  DesignBuild build;
  GoldenRun golden;
  MonitorSet monitors;
  GoldenReference ref;

  explicit Fixture(DesignId id)
      : stim(default_stimulus(id)),
        build(ctlmon::build(stim)),
        golden(run_golden(*build.design, all_signal_paths(*build.design), oracle_output(stim))),
        monitors(learn_monitors(*build.design, build.bundle, golden.trace)),
        ref{golden.cycles, golden.outputs} {}

  DesignFactory factory() const {
    return [s = stim] { return make_design(s); };
  }
};

TEST(Case1, AesTenPerBit) {
  Fixture f(DesignId::kAes);
  const auto specs = enumerate_case1(*f.build.design, 10, f.golden.cycles, 3);
  ASSERT_EQ(specs.size(), 90u);
  std::map<std::pair<std::string, unsigned>, int> per_bit;
  for (const auto& s : specs) {
    const auto& c = std::get<Case1Fault>(s.fault);
    EXPECT_LT(c.cycle, f.golden.cycles);
    ++per_bit[{c.reg, c.bit}];
  }
  EXPECT_EQ(per_bit.size(), 9u);
  for (const auto& [k, n] : per_bit) EXPECT_EQ(n, 10) << k.first;
  EXPECT_EQ(specs, enumerate_case1(*f.build.design, 10, f.golden.cycles, 3));
  EXPECT_NE(specs, enumerate_case1(*f.build.design, 10, f.golden.cycles, 4));
  EXPECT_THROW(enumerate_case1(*f.build.design, 0, f.golden.cycles, 3), ConfigError);
}

TEST(Case2, GroupsAndWindows) {
  Fixture f(DesignId::kRouter);
  const auto groups = case2_groups(*f.build.design);
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].first, "noc/r2/e");
  EXPECT_EQ(groups[1].first, "noc/r2/n");
  const auto specs = enumerate_case2(*f.build.design, 7, f.golden.cycles, 9);
  ASSERT_EQ(specs.size(), 7u);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& c = std::get<Case2Fault>(specs[i].fault);
    EXPECT_EQ(c.group, groups[i % 2].first);
    EXPECT_EQ(c.duration, 10u);
    EXPECT_GE(c.start_cycle, 1u);
    EXPECT_LE(c.start_cycle, f.golden.cycles);
    EXPECT_EQ(c.index, i);
  }
  EXPECT_EQ(enumerate_case2(*f.build.design, 3, f.golden.cycles, 9, 4)[0].bit_or_window(), "4");
  EXPECT_THROW(enumerate_case2(*f.build.design, 3, f.golden.cycles, 9, 0), ConfigError);
}

TEST(KeyedUniform, RangeAndDeterminism) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto v = keyed_uniform({1, 2, i}, 7);
    EXPECT_LT(v, 7u);
    EXPECT_EQ(v, keyed_uniform({1, 2, i}, 7));
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 7u);
  EXPECT_THROW(keyed_uniform({1}, 0), ContractViolation);
}

TEST(Injection, RoundCounterFlipIsCaughtByControlKeys) {
  Fixture f(DesignId::kAes);
  const auto ids = f.monitors.ids();
  const auto col = static_cast<std::size_t>(std::find(ids.begin(), ids.end(), "seq_L3_1") - ids.begin());
  ASSERT_LT(col, ids.size());
  // Bit 1 of the round counter, early in the first block.
  const FaultSpec spec{Case1Fault{"aes/enc/round", 1, 12}};
  const InjectionOutcome o = run_injection(f.factory(), spec, f.monitors, f.ref, 2.0);
  EXPECT_EQ(o.output_class, OutputClass::kSdc);
  EXPECT_TRUE(o.detections[col].detected);
  EXPECT_FALSE(o.detections[col].via_final);
  EXPECT_GE(*o.detections[col].cycle, 12u);
}

TEST(Injection, Errors) {
  Fixture f(DesignId::kAes);
  const FaultSpec ok{Case1Fault{"aes/enc/round", 0, 5}};
  EXPECT_THROW(run_injection(f.factory(), ok, f.monitors, f.ref, 0.5), ConfigError);
  EXPECT_THROW(run_injection(f.factory(), FaultSpec{Case1Fault{"aes/enc/round", 9, 5}}, f.monitors,
                             f.ref, 2.0),
               ConfigError);
  EXPECT_THROW(run_injection(f.factory(), FaultSpec{Case1Fault{"aes/ready", 0, 5}}, f.monitors,
                             f.ref, 2.0),
               ConfigError);
  EXPECT_THROW(run_injection(f.factory(), FaultSpec{Case1Fault{"aes/nope", 0, 5}}, f.monitors,
                             f.ref, 2.0),
               ConfigError);
  EXPECT_THROW(campaign(f.factory(), {ok}, f.monitors, f.ref, 0.9), ConfigError);
}

TEST(Campaign, RowsAreSoundAndClassified) {
  Fixture f(DesignId::kGaus);
  CampaignPlan plan;
  plan.fault_case = FaultCase::kCase2;
  plan.injections = 200;
  plan.seed = 5;
  const auto faults = plan_faults(*f.build.design, plan, f.golden.cycles);
  const DetectionMatrix m = campaign(f.factory(), faults, f.monitors, f.ref, 2.0, 3);
  ASSERT_EQ(m.rows.size(), 200u);
  std::size_t errors = 0;
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    const MatrixRow& r = m.rows[i];
    EXPECT_EQ(r.id, i);
    EXPECT_EQ(r.cycle, faults[i].reference_cycle());
    if (r.output_class == OutputClass::kTimeout) EXPECT_EQ(r.cycles_run, 2 * f.golden.cycles);
    if (r.output_class == OutputClass::kPremature) EXPECT_LT(r.cycles_run, f.golden.cycles);
    errors += r.output_class != OutputClass::kCorrect;
    for (const auto& d : r.detections) {
      if (d.detected && !d.via_final) EXPECT_GE(*d.cycle, r.cycle);
      if (d.via_final) EXPECT_EQ(d.cycle, r.cycles_run);
    }
  }
  EXPECT_GT(errors, 100u);
}

std::string csv(const DetectionMatrix& m) {
  std::ostringstream os;
  write_matrix_csv(os, m);
  return os.str();
}

TEST(Campaign, WorkerCountDoesNotChangeBytes) {
  Fixture f(DesignId::kConv);
  const auto faults = enumerate_case1(*f.build.design, 4, f.golden.cycles, 77);
  DetectionMatrix one = campaign(f.factory(), faults, f.monitors, f.ref, 2.0, 1);
  DetectionMatrix many = campaign(f.factory(), faults, f.monitors, f.ref, 2.0, 6);
  EXPECT_EQ(csv(one), csv(many));
}

TEST(Campaign, ZeroInjections) {
  Fixture f(DesignId::kAes);
  DetectionMatrix m = campaign(f.factory(), {}, f.monitors, f.ref, 2.0, 4);
  EXPECT_TRUE(m.rows.empty());
  EXPECT_EQ(m.detectors.size(), f.monitors.ids().size());
  const std::string text = csv(m);
  std::size_t data_lines = 0;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') ++data_lines;
  }
  EXPECT_EQ(data_lines, 1u);  // the column header only
  EXPECT_THROW(metrics(m, {}), UndefinedMetric);
}

TEST(MatrixCsv, RoundTrip) {
  Fixture f(DesignId::kAes);
  const auto faults = enumerate_case1(*f.build.design, 3, f.golden.cycles, 1);
  auto c2 = enumerate_case2(*f.build.design, 5, f.golden.cycles, 1);
  DetectionMatrix m = campaign(f.factory(), faults, f.monitors, f.ref, 2.0, 2);
  m.meta = MatrixMeta{"0.1.0", "abc", 1, "aes", 1, f.golden.cycles, 9};
  annotate_costs(m, f.monitors);
  add_duplication_baseline(m, duplication_cost(9));
  const std::string text = csv(m);
  const DetectionMatrix back = parse_matrix_csv(text);
  EXPECT_EQ(back, m);
  EXPECT_EQ(csv(back), text);

  DetectionMatrix m2 = campaign(f.factory(), c2, f.monitors, f.ref, 2.0, 2);
  EXPECT_EQ(parse_matrix_csv(csv(m2)).rows, m2.rows);
  EXPECT_THROW(parse_matrix_csv("# version 1\n"), ConfigError);
  EXPECT_THROW(parse_matrix_csv(text.substr(0, text.size() - 3) + "x,y\n"), ConfigError);
}

TEST(OutputClass, Names) {
  for (auto c : {OutputClass::kCorrect, OutputClass::kSdc, OutputClass::kPremature, OutputClass::kTimeout}) {
    EXPECT_EQ(parse_output_class(to_string(c)), c);
  }
  EXPECT_THROW(parse_output_class("hang"), ConfigError);
}

}  // namespace
}  // namespace ctlmon
