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

#include <random>

#include "ctlmon/analysis.hpp"
#include "ctlmon/errors.hpp"
#include "ctlmon/petri.hpp"
#include "oracles.hpp"
#include "toy_design.hpp"

namespace ctlmon {
namespace {

using Dir = Arc::Direction;

// One token in place p1, transition T1 from p1 to p2.
PetriNet two_place_net() {
  return PetriNet("fig", {"p1", "p2"}, Marking{{1, 0}}, {"T1"},
                  {{Dir::kPlaceToTransition, 0, 0}, {Dir::kTransitionToPlace, 1, 0}}, 0);
}

TEST(PetriNet, TwoPlaceFiring) {
  const PetriNet net = two_place_net();
  EXPECT_TRUE(is_enabled(net, net.initial_marking(), 0));
  const Marking after = fire(net, net.initial_marking(), 0);
  EXPECT_EQ(after.tokens, (std::vector<std::uint32_t>{0, 1}));
  EXPECT_EQ(after.total(), 1u);
  EXPECT_FALSE(is_enabled(net, after, 0));
  EXPECT_THROW(fire(net, after, 0), ContractViolation);
  EXPECT_THROW(is_enabled(net, after, 1), ConfigError);
}

TEST(PetriNet, RejectsMalformed) {
  const std::vector<Arc> ok{{Dir::kPlaceToTransition, 0, 0}, {Dir::kTransitionToPlace, 1, 0}};
  EXPECT_THROW(PetriNet("n", {"a", "a"}, Marking{{1, 0}}, {"t"}, ok, std::nullopt), ConfigError);
  EXPECT_THROW(PetriNet("n", {"a", "b"}, Marking{{1}}, {"t"}, ok, std::nullopt), ConfigError);
  EXPECT_THROW(PetriNet("n", {"a", "b"}, Marking{{1, 0}}, {"t"},
                        {{Dir::kPlaceToTransition, 0, 0}}, std::nullopt),
               ConfigError);
  EXPECT_THROW(PetriNet("n", {"a", "b"}, Marking{{1, 0}}, {"t"},
                        {{Dir::kPlaceToTransition, 0, 0}, {Dir::kTransitionToPlace, 5, 0}},
                        std::nullopt),
               ConfigError);
  EXPECT_THROW(PetriNet("n", {"a", "b"}, Marking{{1, 0}}, {"t"}, ok, 3), ConfigError);
}

TEST(PetriNet, MatchesMarkingGraphOracle) {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 60; ++n) {
    const PetriNet net = oracle::random_net(rng, "r" + std::to_string(n));
    const auto inc = oracle::incidence(net);
    for (const auto& tokens : oracle::reachable(net, 500)) {
      const Marking m{tokens};
      for (TransitionId t = 0; t < net.transitions().size(); ++t) {
        const bool want = oracle::enabled(inc, tokens, t);
        ASSERT_EQ(is_enabled(net, m, t), want) << net.name();
        if (want) {
          ASSERT_EQ(fire(net, m, t).tokens, oracle::fire(inc, tokens, t));
        }
      }
    }
  }
}

TEST(PetriNet, ParallelArcsNeedTwoTokens) {
  const PetriNet net("pa", {"a", "b"}, Marking{{1, 0}}, {"t"},
                     {{Dir::kPlaceToTransition, 0, 0},
                      {Dir::kPlaceToTransition, 0, 0},
                      {Dir::kTransitionToPlace, 1, 0}},
                     std::nullopt);
  EXPECT_FALSE(is_enabled(net, net.initial_marking(), 0));
  EXPECT_TRUE(is_enabled(net, Marking{{2, 0}}, 0));
  EXPECT_EQ(fire(net, Marking{{2, 0}}, 0).tokens, (std::vector<std::uint32_t>{0, 1}));
}

// Two-place ring a -> t0 -> b -> t1 -> a.
PetriNet ring(std::optional<TransitionId> fin) {
  return PetriNet("ring", {"a", "b"}, Marking{{1, 0}}, {"t0", "t1"},
                  {{Dir::kPlaceToTransition, 0, 0},
                   {Dir::kTransitionToPlace, 1, 0},
                   {Dir::kPlaceToTransition, 1, 1},
                   {Dir::kTransitionToPlace, 0, 1}},
                  fin);
}

Snapshot snap(u128 x, u128 y) { return {{"x", BitVec(4, x)}, {"y", BitVec(4, y)}}; }

PnMonitorState replay(const NetDefinition& def, const std::vector<std::pair<u128, u128>>& xs) {
  PnMonitorState s = initial_state(def, snap(xs[0].first, xs[0].second));
  for (std::size_t c = 1; c < xs.size(); ++c) {
    s = observe_cycle(s, def, snap(xs[c].first, xs[c].second), c);
  }
  return s;
}

TEST(PetriMonitor, ChangeToTargetRing) {
  NetDefinition def{ring(1), {{"x", EventType::kChangeTo, 1, 0, 0}, {"x", EventType::kChangeTo, 0, 0, 1}}};
  PnMonitorState s = replay(def, {{0, 0}, {1, 0}, {1, 0}, {0, 0}, {2, 0}, {1, 0}, {0, 0}});
  EXPECT_FALSE(s.fault);
  EXPECT_EQ(s.last_fired, 1u);
  EXPECT_FALSE(finalize(s, def.net));

  s = replay(def, {{0, 0}, {1, 0}, {2, 0}, {1, 0}});
  EXPECT_TRUE(s.fault);
  EXPECT_EQ(s.fault_cycle, 3u);
  EXPECT_FALSE(s.via_final);
}

TEST(PetriMonitor, FinalTransitionCheck) {
  NetDefinition def{ring(1), {{"x", EventType::kChangeTo, 1, 0, 0}, {"x", EventType::kChangeTo, 0, 0, 1}}};
  PnMonitorState s = replay(def, {{0, 0}, {1, 0}});
  EXPECT_FALSE(s.fault);
  EXPECT_TRUE(finalize(s, def.net));
  EXPECT_TRUE(s.via_final);
  EXPECT_FALSE(s.fault_cycle);

  NetDefinition open{ring(std::nullopt), def.events};
  s = replay(open, {{0, 0}, {1, 0}});
  EXPECT_FALSE(finalize(s, open.net));
}

TEST(PetriMonitor, CountingEvents) {
  // t0 on the 2nd change of x; t1 on the 2nd change of y to 3.
  NetDefinition def{ring(std::nullopt), {{"x", EventType::kNthChange, std::nullopt, 2, 0},
                                         {"y", EventType::kNthChangeTo, 3, 2, 1}}};
  PnMonitorState s = replay(def, {{0, 0}, {1, 3}, {2, 0}, {2, 3}});
  EXPECT_FALSE(s.fault);
  EXPECT_EQ(s.marking.tokens, (std::vector<std::uint32_t>{1, 0}));
  // Any later change does not fire again.
  s = replay(def, {{0, 0}, {1, 3}, {2, 0}, {2, 3}, {5, 1}, {6, 3}});
  EXPECT_FALSE(s.fault);
  // y reaching its count first fires t1 while it is disabled.
  s = replay(def, {{0, 0}, {0, 3}, {0, 1}, {0, 3}});
  EXPECT_TRUE(s.fault);
  EXPECT_EQ(s.fault_cycle, 3u);
}

TEST(PetriMonitor, SameCycleEventsInDeclaredOrder) {
  NetDefinition def{ring(std::nullopt), {{"x", EventType::kAnyChange, std::nullopt, 0, 0},
                                         {"y", EventType::kAnyChange, std::nullopt, 0, 1}}};
  EXPECT_FALSE(replay(def, {{0, 0}, {1, 1}, {2, 2}}).fault);
  NetDefinition swapped{def.net, {def.events[1], def.events[0]}};
  EXPECT_TRUE(replay(swapped, {{0, 0}, {1, 1}}).fault);
}

TEST(PetriMonitor, FaultLatchesFirstCycle) {
  NetDefinition def{ring(std::nullopt), {{"x", EventType::kChangeTo, 1, 0, 1}}};
  PnMonitorState s = replay(def, {{0, 0}, {1, 0}, {0, 0}, {1, 0}});
  EXPECT_TRUE(s.fault);
  EXPECT_EQ(s.fault_cycle, 1u);
}

TEST(PetriMonitor, EventValidation) {
  const PetriNet net = ring(std::nullopt);
  EXPECT_THROW(validate_event(net, {"x", EventType::kChangeTo, std::nullopt, 0, 0}), ConfigError);
  EXPECT_THROW(validate_event(net, {"x", EventType::kNthChange, std::nullopt, 0, 0}), ConfigError);
  EXPECT_THROW(validate_event(net, {"x", EventType::kAnyChange, std::nullopt, 0, 7}), ConfigError);
  EXPECT_THROW(initial_state({net, {{"z", EventType::kAnyChange, std::nullopt, 0, 0}}}, snap(0, 0)),
               ConfigError);
}

TEST(PetriMonitor, MatchesReplayOracle) {
  std::mt19937_64 rng(5);
  const std::vector<std::string> signals{"x", "y"};
  for (int n = 0; n < 300; ++n) {
    NetDefinition def{oracle::random_net(rng, "r"), {}};
    const auto nt = def.net.transitions().size();
    const unsigned nev = std::uniform_int_distribution<unsigned>(1, 4)(rng);
    for (unsigned e = 0; e < nev; ++e) {
      EventSpec ev;
      ev.signal = signals[rng() % 2];
      ev.type = static_cast<EventType>(1 + rng() % 4);
      if (ev.type == EventType::kChangeTo || ev.type == EventType::kNthChangeTo) ev.target = rng() % 4;
      if (ev.type == EventType::kNthChange || ev.type == EventType::kNthChangeTo) ev.index = 1 + rng() % 3;
      ev.transition = static_cast<TransitionId>(rng() % nt);
      def.events.push_back(ev);
    }
    std::vector<std::vector<u128>> values;
    std::vector<std::pair<u128, u128>> xs;
    for (int c = 0; c < 30; ++c) {
      const u128 x = rng() % 4, y = rng() % 4;
      values.push_back({x, y});
      xs.push_back({x, y});
    }
    PnMonitorState s = replay(def, xs);
    finalize(s, def.net);
    const oracle::PnVerdict got{s.fault, s.fault_cycle, s.via_final};
    ASSERT_EQ(got, oracle::pn_monitor(def, signals, values)) << serialize_nets({def});
  }
}

TEST(PetriDetector, OnlineEqualsOffline) {
  testing::ToyCounter toy(6);
  auto def = std::make_shared<NetDefinition>(NetDefinition{
      ring(0), {{"toy/phase", EventType::kChangeTo, 1, 0, 0},
                {"toy/phase", EventType::kChangeTo, 0, 0, 1},
                {"toy/ctr", EventType::kNthChangeTo, 3, 1, 0}}});
  PetriDetector det(def);
  std::vector<CycleHook*> hooks{&det};
  const Trace t = run(toy, RunOptions{{"toy/phase", "toy/ctr"}, 50, true}, hooks);
  det.finalize(*t.terminal_cycle);

  toy.reset();
  PnMonitorState s = initial_state(*def, {{"toy/phase", toy.read(toy.require("toy/phase"))},
                                          {"toy/ctr", toy.read(toy.require("toy/ctr"))}});
  for (const auto& row : t.rows) s = observe_cycle(s, *def, snapshot(t, row), row.cycle);
  finalize(s, def->net);
  EXPECT_EQ(det.state().fault, s.fault);
  EXPECT_EQ(det.state().fault_cycle, s.fault_cycle);
  EXPECT_EQ(det.state().marking, s.marking);
  // ctr reaches 3 at cycle 3 while t0 is disabled (phase rose at 1 and 3).
  EXPECT_TRUE(s.fault);
  const DetectionRecord r = det.record();
  EXPECT_TRUE(r.detected);
  EXPECT_EQ(r.cycle, s.fault_cycle);
  EXPECT_FALSE(r.via_final);

  // The detector is reusable after another reset.
  run(toy, RunOptions{{"toy/ctr"}, 50, false}, hooks);
  det.finalize(6);
  EXPECT_EQ(det.record(), r);
}

TEST(PetriText, ParsesSimpleNet) {
  const auto nets = parse_nets(
      "# comment\n"
      "net fig\n"
      "place p1 1\n"
      "place p2 0\n"
      "transition T1\n"
      "arc p1 T1\n"
      "arc T1 p2\n"
      "final T1\n"
      "event T1 top/state type=2 target=0x3\n"
      "end\n");
  ASSERT_EQ(nets.size(), 1u);
  EXPECT_EQ(nets[0].net, two_place_net());
  ASSERT_EQ(nets[0].events.size(), 1u);
  EXPECT_EQ(nets[0].events[0], (EventSpec{"top/state", EventType::kChangeTo, 3, 0, 0}));
  EXPECT_EQ(area_cost(nets[0]), 4.0);
}

TEST(PetriText, RoundTrip) {
  std::mt19937_64 rng(3);
  std::vector<NetDefinition> defs;
  for (int n = 0; n < 40; ++n) {
    NetDefinition def{oracle::random_net(rng, "n" + std::to_string(n)), {}};
    def.events.push_back({"a/b", EventType::kNthChangeTo, u128{rng()} << 64 | rng(), 2, 0});
    def.events.push_back({"c", EventType::kAnyChange, std::nullopt, 0,
                          static_cast<TransitionId>(def.net.transitions().size() - 1)});
    defs.push_back(def);
  }
  const std::string text = serialize_nets(defs);
  EXPECT_EQ(parse_nets(text), defs);
  EXPECT_EQ(serialize_nets(parse_nets(text)), text);
}

TEST(PetriText, ErrorsCarryLineNumbers) {
  auto message = [](const char* text) {
    try {
      parse_nets(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("net a\nplace p 1\nbogus\nend\n").find("line 3"), std::string::npos);
  EXPECT_NE(message("net a\nplace p 1\nplace q 0\ntransition t\narc p t\narc t q\n"
                    "event t s type=2\nend\n")
                .find("line"),
            std::string::npos);
  EXPECT_NE(message("net a\nplace p 1\n").find("line"), std::string::npos);
}

TEST(PetriArea, CountsEventsByType) {
  NetDefinition def{ring(std::nullopt), {{"x", EventType::kAnyChange, std::nullopt, 0, 0},
                                         {"y", EventType::kNthChange, std::nullopt, 2, 1}}};
  EXPECT_EQ(area_cost(def), 2 + 2 + 1 + 3.0);
  AreaCoefficients k;
  k.place = 0.5;
  k.transition = 2;
  EXPECT_EQ(area_cost(def, k), 1 + 4 + 1 + 3.0);
  EXPECT_THROW(area_cost(NetDefinition{ring(std::nullopt), {}}), ConfigError);
  k.place = -1;
  EXPECT_THROW(area_cost(def, k), ConfigError);
}

}  // namespace
}  // namespace ctlmon
