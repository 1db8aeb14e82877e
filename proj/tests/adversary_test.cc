//
// Copyright 2026 The inca-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "inca/adversary.h"

#include <set>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "inca/linalg.h"
#include "inca/protocol.h"
#include "inca/rng.h"
#include "inca/serialize.h"
#include "inca/topology.h"
#include "inca/types.h"

namespace inca {
namespace {

struct Instance {
  CommSchedule schedule;
  OnlineHistory history;
  ProtocolConfig config;
  Transcript transcript;
  AdversaryView view;
};

Eigen::VectorXd UniformX(int n, uint64_t seed) {
  SplitMix64 rng(seed);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = rng.Uniform();
  return x;
}

Instance MakeInstance(int n, int k, int T, SplitKind kind, ViewMode mode, double level,
            double gamma, uint64_t seed, double sigma = 1.0) {
  Instance r;
  r.schedule = RandomKOutSchedule(n, k, T, seed);
  r.history = SampleDropouts(n, T, gamma, seed);
  r.config.n = n;
  r.config.T = T;
  r.config.sigma_ind_sq = sigma;
  r.config.split = MakeSplit(kind, T, 10.0 * sigma);
  r.config.seed = seed;
  r.transcript =
      RunInca(r.config, r.schedule, r.history, UniformX(n, seed + 1000));
  r.view = mode == ViewMode::kEavesdrop
               ? BuildEavesdropView(n, T, level, seed)
               : BuildCollusionView(r.schedule, r.history,
                                    SampleCorrupted(n, level, seed));
  return r;
}

AdversarySystem SystemOf(const Instance& r, RowReduction reduction) {
  SystemOptions o;
  o.reduction = reduction;
  return BuildLinearSystem(r.schedule, r.history, r.config.split, r.view,
                           &r.transcript, o);
}

std::set<std::pair<int, int>> ObservedPairs(const AdversaryView& v) {
  std::set<std::pair<int, int>> out;
  for (int t = 0; t <= v.T; ++t) {
    for (int i = 0; i < v.n; ++i) {
      if (v.Observed(i, t)) out.insert({i, t});
    }
  }
  return out;
}

TEST(ViewTest, EavesdropZeroFractionSeesFinalOnly) {
  AdversaryView v = BuildEavesdropView(10, 4, 0.0, 1);
  EXPECT_EQ(v.ObservedCount(), 10);
  for (int i = 0; i < 10; ++i) EXPECT_TRUE(v.Observed(i, 4));
  EXPECT_EQ(v.Honest().size(), 10u);
}

TEST(ViewTest, EavesdropCountsAndPrefix) {
  AdversaryView a = BuildEavesdropView(100, 6, 0.5, 3);
  AdversaryView b = BuildEavesdropView(100, 12, 0.5, 3);
  for (int t = 0; t < 6; ++t) {
    int count = 0;
    for (int i = 0; i < 100; ++i) {
      count += a.Observed(i, t);
      EXPECT_EQ(a.Observed(i, t), b.Observed(i, t));
    }
    EXPECT_EQ(count, 50);
  }
  EXPECT_THROW(BuildEavesdropView(10, 2, 1.5, 1), ConfigError);
}

TEST(ViewTest, CollusionHandExample) {
  // 0 -> 1, 1 -> 2, 2 -> 0 with party 2 corrupted.
  CommSchedule s = StaticSchedule(RingMatrix(3), 1);
  AdversaryView v = BuildCollusionView(s, OnlineHistory::AllOnline(3, 1),
                                       {0, 0, 1});
  std::set<std::pair<int, int>> want = {{1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}};
  EXPECT_EQ(ObservedPairs(v), want);
  EXPECT_EQ(v.Honest(), (std::vector<int>{0, 1}));
}

TEST(ViewTest, AllCorruptedSeesEverything) {
  CommSchedule s = RandomKOutSchedule(8, 2, 3, 1);
  AdversaryView v = BuildCollusionView(s, OnlineHistory::AllOnline(8, 3),
                                       std::vector<char>(8, 1));
  EXPECT_EQ(v.ObservedCount(), 8 * 4);
}

TEST(ViewTest, DroppedReceiverDoesNotLeak) {
  // 0 -> 1 but 1 (corrupted) is offline, so the weight stays with 0.
  CommSchedule s = StaticSchedule(RingMatrix(3), 2);
  OnlineHistory h = OnlineHistory::AllOnline(3, 2);
  h.online[1][1] = 0;
  h.online[2][1] = 0;
  AdversaryView v = BuildCollusionView(s, h, {0, 1, 0});
  EXPECT_FALSE(v.Observed(0, 0));
  EXPECT_FALSE(v.Observed(0, 1));
  EXPECT_TRUE(v.Observed(1, 0));
}

TEST(ViewTest, SampleCorruptedCount) {
  std::vector<char> c = SampleCorrupted(200, 0.1, 5);
  int count = 0;
  for (char x : c) count += x;
  EXPECT_EQ(count, 20);
  EXPECT_THROW(SampleCorrupted(10, -0.1, 1), ConfigError);
}

TEST(SystemTest, FinalMessagesOnlyDimensions) {
  const int n = 3, T = 2;
  CommSchedule s = RandomKOutSchedule(n, 1, T, 4);
  AdversarySystem sys =
      BuildLinearSystem(s, OnlineHistory::AllOnline(n, T), MakeIncremental(T, 1),
                        BuildEavesdropView(n, T, 0.0, 1));
  EXPECT_EQ(sys.l.rows(), 3);
  EXPECT_EQ(sys.l.cols(), 3);
  EXPECT_EQ(sys.n.rows(), 3);
  EXPECT_EQ(sys.n.cols(), 6);
  EXPECT_EQ(sys.y.size(), 0);
  EXPECT_EQ(NumericalRank(sys.Stacked(), 1e-9), 3);
}

TEST(SystemTest, FullyObservedIsSquareAndInvertible) {
  const int n = 5, T = 3;
  Instance r = MakeInstance(n, 1, T, SplitKind::kIncremental, ViewMode::kEavesdrop, 1.0,
                  0.0, 6);
  AdversarySystem sys = SystemOf(r, RowReduction::kQr);
  EXPECT_EQ(sys.m(), n * (T + 1));
  EXPECT_EQ(sys.m(), n + n * T);
  EXPECT_EQ(NumericalRank(sys.Stacked(), 1e-9), sys.m());
  Eigen::VectorXd rec = RecoverInputs(sys);
  EXPECT_LE((rec - r.transcript.inputs_noisy).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(SystemTest, EarlySplitFirstRowsAreIdentity) {
  const int n = 4, T = 2;
  Instance r = MakeInstance(n, 1, T, SplitKind::kEarly, ViewMode::kEavesdrop, 1.0, 0.0, 2);
  AdversarySystem sys = SystemOf(r, RowReduction::kNone);
  for (int row = 0; row < sys.m(); ++row) {
    auto [i, t] = sys.rows[row];
    if (t == 0) {
      EXPECT_TRUE(sys.l.row(row).isApprox(
          Eigen::RowVectorXd::Unit(n, i)));
    }
  }
}

TEST(SystemTest, ReconstructsAcrossRandomRuns) {
  SplitMix64 rng(99);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 4 + static_cast<int>(rng.Below(17));
    const int T = 1 + static_cast<int>(rng.Below(10));
    const int k = 1 + static_cast<int>(rng.Below(3));
    const SplitKind kind = rep % 2 ? SplitKind::kEarly : SplitKind::kIncremental;
    const ViewMode mode = (rep / 2) % 2 ? ViewMode::kCollusion
                                        : ViewMode::kEavesdrop;
    const double gamma = (rep / 4) % 2 ? 0.2 : 0.0;
    Instance r = MakeInstance(n, std::min(k, n - 1), T, kind, mode,
                    mode == ViewMode::kCollusion ? 0.3 : 0.5, gamma, rep + 1);
    for (RowReduction red :
         {RowReduction::kNone, RowReduction::kStructural, RowReduction::kQr}) {
      AdversarySystem sys = SystemOf(r, red);
      EXPECT_LE(ReconstructCheck(sys, r.transcript), 1e-9) << rep;
      if (red == RowReduction::kQr) {
        EXPECT_LE(sys.m(), sys.HonestCount() * (T + 1));
      }
    }
  }
}

TEST(SystemTest, TamperedTranscriptDetected) {
  Instance r = MakeInstance(10, 1, 4, SplitKind::kIncremental, ViewMode::kEavesdrop, 1.0,
                  0.0, 8);
  AdversarySystem clean = SystemOf(r, RowReduction::kNone);
  Instance tampered = r;
  tampered.transcript.messages(2, 3) += 1e-3;
  AdversarySystem sys = SystemOf(tampered, RowReduction::kNone);
  EXPECT_GT(ReconstructCheck(sys, r.transcript), 1e-6);
  EXPECT_LE(ReconstructCheck(clean, r.transcript), 1e-9);
}

TEST(SystemTest, ZeroNoiseRunIsExact) {
  Instance r = MakeInstance(12, 2, 5, SplitKind::kIncremental, ViewMode::kCollusion, 0.25,
                  0.0, 3, 0.0);
  EXPECT_LE(ReconstructCheck(SystemOf(r, RowReduction::kQr), r.transcript),
            1e-12);
}

TEST(SystemTest, ReductionPreservesRowSpace) {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    Instance r = MakeInstance(10, 1, 6, SplitKind::kIncremental,
                    seed % 2 ? ViewMode::kCollusion : ViewMode::kEavesdrop,
                    seed % 2 ? 0.3 : 0.6, seed % 3 ? 0.2 : 0.0, seed);
    AdversarySystem full = SystemOf(r, RowReduction::kNone);
    AdversarySystem reduced = SystemOf(r, RowReduction::kQr);
    Eigen::MatrixXd basis = reduced.Stacked().transpose();
    EXPECT_EQ(NumericalRank(basis, 1e-9), reduced.m());
    EXPECT_EQ(NumericalRank(full.Stacked(), 1e-9), reduced.m());
    Eigen::MatrixXd rows = full.Stacked();
    for (int i = 0; i < full.m(); ++i) {
      if (rows.row(i).norm() == 0.0) continue;
      EXPECT_LE(LeastSquaresResidual(basis, rows.row(i).transpose()), 1e-9)
          << seed << " row " << i;
    }
  }
}

TEST(SystemTest, CorruptedColumnsRemoved) {
  Instance r = MakeInstance(9, 2, 3, SplitKind::kEarly, ViewMode::kCollusion, 0.34, 0.0, 5);
  AdversarySystem sys = SystemOf(r, RowReduction::kQr);
  EXPECT_EQ(sys.honest, r.view.Honest());
  EXPECT_EQ(sys.n.cols(), sys.HonestCount() * 3);
  for (auto [i, t] : sys.rows) EXPECT_FALSE(r.view.Corrupted(i));
}

TEST(SystemTest, HiddenValuesLayout) {
  Instance r = MakeInstance(6, 1, 2, SplitKind::kIncremental, ViewMode::kEavesdrop, 0.5,
                  0.0, 1);
  AdversarySystem sys = SystemOf(r, RowReduction::kQr);
  Eigen::VectorXd h = HiddenValues(sys, r.transcript);
  ASSERT_EQ(h.size(), 6 + 12);
  EXPECT_DOUBLE_EQ(h(2), r.transcript.inputs_noisy(2));
  EXPECT_DOUBLE_EQ(h(6 + 2 * 2 + 1), r.transcript.cancel_noise(2, 1));
}

TEST(SystemTest, ErrorsAreTyped) {
  Instance r = MakeInstance(6, 1, 3, SplitKind::kIncremental, ViewMode::kEavesdrop, 0.0,
                  0.0, 1);
  AdversarySystem sys = SystemOf(r, RowReduction::kQr);
  EXPECT_THROW(RecoverInputs(sys), ConditioningError);
  AdversarySystem no_y = BuildLinearSystem(r.schedule, r.history,
                                           r.config.split, r.view);
  EXPECT_THROW(ReconstructCheck(no_y, r.transcript), ConfigError);
  AdversaryView all = BuildCollusionView(r.schedule, r.history,
                                         std::vector<char>(6, 1));
  EXPECT_THROW(BuildLinearSystem(r.schedule, r.history, r.config.split, all),
               ConfigError);
  EXPECT_THROW(BuildLinearSystem(r.schedule, r.history, MakeIncremental(2, 1),
                                 r.view),
               ConfigError);
}

TEST(SystemTest, JsonExportRoundTrips) {
  Instance r = MakeInstance(4, 1, 2, SplitKind::kIncremental, ViewMode::kEavesdrop, 0.5,
                  0.0, 2);
  AdversarySystem sys = SystemOf(r, RowReduction::kQr);
  nlohmann::json doc = nlohmann::json::parse(DumpJson(ToJson(sys)));
  ASSERT_EQ(doc["L"].size(), static_cast<size_t>(sys.m()));
  EXPECT_EQ(doc["N"][0].size(), static_cast<size_t>(sys.n.cols()));
  for (int i = 0; i < sys.m(); ++i) {
    for (int h = 0; h < sys.HonestCount(); ++h) {
      EXPECT_EQ(doc["L"][i][h].get<double>(), sys.l(i, h));
    }
    EXPECT_EQ(doc["y"][i].get<double>(), sys.y(i));
  }
}

}  // namespace
}  // namespace inca
