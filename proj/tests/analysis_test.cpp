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

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "ctlmon/analysis.hpp"
#include "ctlmon/errors.hpp"
#include "oracles.hpp"

namespace ctlmon {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MatrixRow row(std::uint64_t id, OutputClass cls, std::uint64_t cycle,
              std::vector<DetectionRecord> det, FaultCase fc = FaultCase::kCase1) {
  return MatrixRow{id, fc, "r", "0", cycle, cls, 200, std::move(det)};
}

DetectionMatrix matrix(std::vector<DetectorColumn> cols, std::vector<MatrixRow> rows) {
  DetectionMatrix m;
  m.meta = MatrixMeta{"t", "-", 1, "aes", 1, 100, 9};
  m.detectors = std::move(cols);
  m.rows = std::move(rows);
  return m;
}

const DetectionRecord kNone{};
DetectionRecord at(std::uint64_t c) { return {true, c, false}; }
DetectionRecord final_at(std::uint64_t c) { return {true, c, true}; }

TEST(Metrics, FourRowExample) {
  // Detected 3 and 5 cycles after injection, one via the final check only,
  // one missed; all four are output errors.
  const DetectionMatrix m = matrix(
      {{"a", DetectorKind::kPetri, 1}},
      {row(0, OutputClass::kSdc, 10, {at(13)}), row(1, OutputClass::kTimeout, 20, {at(25)}),
       row(2, OutputClass::kPremature, 30, {final_at(90)}), row(3, OutputClass::kSdc, 40, {kNone})});
  const Metrics x = metrics(m, {"a"});
  EXPECT_EQ(x.n_oe, 4u);
  EXPECT_EQ(x.n_tp, 3u);
  EXPECT_EQ(x.n_to, 1u);
  EXPECT_DOUBLE_EQ(x.dr, 0.75);
  EXPECT_DOUBLE_EQ(x.dr_to, 0.25);
  ASSERT_TRUE(x.latency);
  EXPECT_DOUBLE_EQ(*x.latency, 4.0);
}

TEST(Metrics, HalfDetected) {
  std::vector<MatrixRow> rows;
  for (int i = 0; i < 100; ++i) rows.push_back(row(i, OutputClass::kSdc, 0, {i % 2 ? at(1) : kNone}));
  EXPECT_DOUBLE_EQ(metrics(matrix({{"a", DetectorKind::kPetri, 1}}, rows), {"a"}).dr, 0.5);
}

TEST(Metrics, FinalOnlyHasNoLatency) {
  const DetectionMatrix m = matrix({{"a", DetectorKind::kPetri, 1}},
                                   {row(0, OutputClass::kSdc, 1, {final_at(9)}),
                                    row(1, OutputClass::kSdc, 1, {final_at(9)}),
                                    row(2, OutputClass::kSdc, 1, {kNone})});
  const Metrics x = metrics(m, {"a"});
  EXPECT_DOUBLE_EQ(x.dr_to, x.dr);
  EXPECT_FALSE(x.latency);
}

TEST(Metrics, UnionPrefersMidRunAndEarliest) {
  const DetectionMatrix m = matrix(
      {{"a", DetectorKind::kPetri, 1}, {"b", DetectorKind::kSequence, 1}},
      {row(0, OutputClass::kSdc, 10, {final_at(50), at(12)}), row(1, OutputClass::kSdc, 10, {at(18), at(14)}),
       row(2, OutputClass::kCorrect, 10, {at(11), kNone}), row(3, OutputClass::kSdc, 10, {kNone, kNone})});
  const Metrics x = metrics(m, {"a", "b"});
  EXPECT_EQ(x.n_tp, 2u);
  EXPECT_EQ(x.n_to, 0u);
  EXPECT_EQ(x.n_benign, 1u);
  EXPECT_DOUBLE_EQ(*x.latency, 3.0);
  const Metrics a = metrics(m, {"a"});
  EXPECT_EQ(a.n_to, 1u);
  EXPECT_DOUBLE_EQ(*a.latency, 8.0);
  EXPECT_EQ(metrics(m, {}).n_tp, 0u);
  EXPECT_THROW(metrics(m, {"zz"}), ConfigError);
}

TEST(Metrics, UndefinedWithoutErrors) {
  const DetectionMatrix m = matrix({{"a", DetectorKind::kPetri, 1}},
                                   {row(0, OutputClass::kCorrect, 1, {at(3)})});
  EXPECT_THROW(metrics(m, {"a"}), UndefinedMetric);
  EXPECT_THROW(select_detectors(m, SelectMode::kMaxDrUnderArea, 10), UndefinedMetric);
}

TEST(Metrics, RandomMatricesMatchDefinition) {
  std::mt19937_64 rng(42);
  for (int n = 0; n < 50; ++n) {
    const DetectionMatrix m = oracle::random_matrix(rng, 1 + rng() % 6, 20 + rng() % 60);
    std::vector<std::string> ids;
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < m.detectors.size(); ++c) {
      if (rng() % 2) {
        ids.push_back(m.detectors[c].id);
        cols.push_back(c);
      }
    }
    const oracle::RefMetrics r = oracle::metrics(m, cols);
    if (r.n_oe == 0) continue;
    const Metrics x = metrics(m, ids);
    EXPECT_EQ(x.n_oe, r.n_oe);
    EXPECT_EQ(x.n_tp, r.n_tp);
    EXPECT_EQ(x.n_to, r.n_to);
    EXPECT_EQ(x.n_benign, r.n_benign);
    EXPECT_DOUBLE_EQ(x.dr, static_cast<double>(r.n_tp) / static_cast<double>(r.n_oe));
    EXPECT_EQ(x.latency.has_value(), r.latency_n > 0);
    if (x.latency) EXPECT_DOUBLE_EQ(*x.latency, r.latency_sum / static_cast<double>(r.latency_n));
  }
}

TEST(Duplication, DetectsInternalFlipsOnly) {
  DetectionMatrix m = matrix({{"a", DetectorKind::kPetri, 1}},
                             {row(0, OutputClass::kSdc, 7, {kNone}),
                              row(1, OutputClass::kCorrect, 9, {kNone}),
                              row(2, OutputClass::kSdc, 3, {kNone}, FaultCase::kCase2)});
  add_duplication_baseline(m, duplication_cost(9));
  ASSERT_EQ(m.detectors.size(), 2u);
  EXPECT_EQ(m.detectors[1], (DetectorColumn{kDuplicationId, DetectorKind::kDuplication, 18}));
  EXPECT_EQ(m.rows[0].detections[1], at(7));
  EXPECT_EQ(m.rows[1].detections[1], at(9));
  EXPECT_EQ(m.rows[2].detections[1], kNone);
  add_duplication_baseline(m, 5);  // replaces, never duplicates the column
  EXPECT_EQ(m.detectors.size(), 2u);
  EXPECT_EQ(m.detectors[1].area_cost, 5);
  const Metrics x = metrics(m, {kDuplicationId});
  EXPECT_DOUBLE_EQ(x.dr, 0.5);
  EXPECT_DOUBLE_EQ(*x.latency, 0.0);
}

TEST(Area, Coefficients) {
  EXPECT_DOUBLE_EQ(duplication_cost(9), 18.0);
  AreaCoefficients k;
  k.duplicated_bit = 3;
  EXPECT_DOUBLE_EQ(duplication_cost(9, k), 27.0);
  k.pair = -0.1;
  EXPECT_THROW(k.validate(), ConfigError);
  EXPECT_THROW(duplication_cost(9, k), ConfigError);
}

TEST(Select, TrivialBudgets) {
  const DetectionMatrix m = matrix(
      {{"a", DetectorKind::kPetri, 3}, {"b", DetectorKind::kPetri, 2}},
      {row(0, OutputClass::kSdc, 1, {at(2), kNone}), row(1, OutputClass::kSdc, 1, {kNone, at(2)}),
       row(2, OutputClass::kSdc, 1, {kNone, kNone})});
  const Selection all = select_detectors(m, SelectMode::kMaxDrUnderArea, kInf);
  EXPECT_EQ(all.subset, (std::vector<std::string>{"a", "b"}));
  EXPECT_DOUBLE_EQ(all.metrics.dr, 2.0 / 3);
  EXPECT_DOUBLE_EQ(all.max_dr, 2.0 / 3);
  EXPECT_TRUE(all.exhaustive);
  const Selection none = select_detectors(m, SelectMode::kMaxDrUnderArea, 1.5);
  EXPECT_TRUE(none.subset.empty());
  EXPECT_DOUBLE_EQ(none.metrics.dr, 0.0);
  // Equal detections: the cheaper one wins.
  EXPECT_EQ(select_detectors(m, SelectMode::kMaxDrUnderArea, 4).subset, std::vector<std::string>{"b"});
  const Selection cheap = select_detectors(m, SelectMode::kMinAreaUnderDr, 0.3);
  EXPECT_EQ(cheap.subset, std::vector<std::string>{"b"});
  EXPECT_DOUBLE_EQ(cheap.cost, 2);
  EXPECT_TRUE(cheap.feasible);
}

TEST(Select, InfeasibleTargetReportsBestRate) {
  const DetectionMatrix m = matrix(
      {{"a", DetectorKind::kPetri, 3}, {"b", DetectorKind::kPetri, 2}, {"c", DetectorKind::kPetri, 9}},
      {row(0, OutputClass::kSdc, 1, {at(2), kNone, at(3)}), row(1, OutputClass::kSdc, 1, {kNone, at(2), kNone}),
       row(2, OutputClass::kSdc, 1, {kNone, kNone, kNone})});
  const Selection s = select_detectors(m, SelectMode::kMinAreaUnderDr, 0.9);
  EXPECT_FALSE(s.feasible);
  EXPECT_DOUBLE_EQ(s.max_dr, 2.0 / 3);
  EXPECT_EQ(s.subset, (std::vector<std::string>{"a", "b"}));
  EXPECT_DOUBLE_EQ(s.metrics.dr, s.max_dr);
}

TEST(Select, DuplicationExcludedByDefault) {
  DetectionMatrix m = matrix({{"a", DetectorKind::kPetri, 1}},
                             {row(0, OutputClass::kSdc, 1, {kNone}), row(1, OutputClass::kSdc, 1, {at(1)})});
  add_duplication_baseline(m, 0.5);
  EXPECT_EQ(select_detectors(m, SelectMode::kMaxDrUnderArea, kInf).subset, std::vector<std::string>{"a"});
  EXPECT_EQ(select_detectors(m, SelectMode::kMaxDrUnderArea, kInf, {}).subset,
            std::vector<std::string>{kDuplicationId});
}

TEST(Select, MatchesBruteForce) {
  std::mt19937_64 rng(99);
  for (int n = 0; n < 40; ++n) {
    const DetectionMatrix m = oracle::random_matrix(rng, 1 + rng() % 10, 30 + rng() % 50);
    double total = 0;
    for (const auto& d : m.detectors) total += d.area_cost;
    for (double frac : {0.0, 0.1, 0.3, 0.6, 1.0}) {
      const double budget = frac * total;
      const Selection s = select_detectors(m, SelectMode::kMaxDrUnderArea, budget);
      const oracle::RefChoice r = oracle::brute_force(m, SelectMode::kMaxDrUnderArea, budget);
      EXPECT_EQ(s.subset, r.ids);
      EXPECT_EQ(s.metrics.n_tp, r.n_tp);
      EXPECT_LE(s.cost, budget);
    }
    for (double target : {0.2, 0.5, 0.8, 0.95, 1.0}) {
      const Selection s = select_detectors(m, SelectMode::kMinAreaUnderDr, target);
      const oracle::RefChoice r = oracle::brute_force(m, SelectMode::kMinAreaUnderDr, target);
      EXPECT_EQ(s.subset, r.ids) << target;
      EXPECT_EQ(s.feasible, r.feasible);
      EXPECT_DOUBLE_EQ(s.cost, r.cost);
    }
  }
}

TEST(Select, GreedyBeyondTwentyDetectors) {
  std::mt19937_64 rng(7);
  const DetectionMatrix m = oracle::random_matrix(rng, 26, 300);
  const Selection s = select_detectors(m, SelectMode::kMaxDrUnderArea, 12);
  EXPECT_FALSE(s.exhaustive);
  EXPECT_LE(s.cost, 12);
  EXPECT_GT(s.metrics.dr, 0);
  const Selection t = select_detectors(m, SelectMode::kMinAreaUnderDr, 0.5);
  EXPECT_TRUE(t.feasible);
  EXPECT_GE(t.metrics.dr, 0.5);
}

TEST(Curve, MonotoneAndEndpoints) {
  std::mt19937_64 rng(13);
  for (int n = 0; n < 20; ++n) {
    const DetectionMatrix m = oracle::random_matrix(rng, 2 + rng() % 8, 60);
    const auto curve = tradeoff_curve(m, {0, 1, 2, 4, 8, 16, 32, kInf});
    ASSERT_EQ(curve.size(), 8u);
    EXPECT_DOUBLE_EQ(curve.front().dr, 0.0);
    EXPECT_DOUBLE_EQ(curve.back().dr, select_detectors(m, SelectMode::kMaxDrUnderArea, kInf).max_dr);
    for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_GE(curve[i].dr, curve[i - 1].dr);
  }
  const DetectionMatrix m = oracle::random_matrix(rng, 3, 40);
  EXPECT_THROW(tradeoff_curve(m, {2, 1}), ConfigError);
}

TEST(Report, RowsAndCsv) {
  DetectionMatrix m = matrix(
      {{"a", DetectorKind::kPetri, 3}, {"b", DetectorKind::kSequence, 2.5}},
      {row(0, OutputClass::kSdc, 10, {at(13), kNone}), row(1, OutputClass::kSdc, 10, {kNone, final_at(99)}),
       row(2, OutputClass::kCorrect, 10, {kNone, at(12)})});
  add_duplication_baseline(m, 18);
  const auto rows = report_rows(m);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[2].subset, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(rows[3].subset, std::vector<std::string>{kDuplicationId});
  std::ostringstream os;
  write_metrics_csv(os, rows, "# x\n");
  EXPECT_EQ(os.str(),
            "# x\nsubset,cost,dr,dr_to,latency,n_oe,n_tp\n"
            "a,3,0.5,0,3,2,1\n"
            "b,2.5,0.5,0.5,,2,1\n"
            "a+b,5.5,1,0.5,3,2,2\n"
            "duplication,18,1,0,0,2,2\n");
  std::ostringstream bn;
  write_benign_csv(bn, rows, "");
  EXPECT_EQ(bn.str(), "subset,n_benign\na,0\nb,1\na+b,1\nduplication,1\n");
  std::ostringstream tc;
  write_tradeoff_csv(tc, tradeoff_curve(m, {0, 3, kInf}), "");
  EXPECT_EQ(tc.str(), "budget,dr,dr_to,subset\n0,0,0,\n3,0.5,0.5,b\ninf,1,0.5,a+b\n");
}

}  // namespace
}  // namespace ctlmon
