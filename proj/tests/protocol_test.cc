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

#include "inca/protocol.h"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "inca/rng.h"
#include "inca/topology.h"
#include "inca/types.h"

namespace inca {
namespace {

Eigen::VectorXd Vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(v.size());
  int i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Eigen::VectorXd UniformX(int n, uint64_t seed) {
  SplitMix64 rng(seed);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = rng.Uniform();
  return x;
}

ProtocolConfig Config(int n, int T, double sigma_ind_sq, double sigma_delta_sq,
                      SplitKind kind, uint64_t seed) {
  ProtocolConfig c;
  c.n = n;
  c.T = T;
  c.sigma_ind_sq = sigma_ind_sq;
  c.split = MakeSplit(kind, T, sigma_delta_sq);
  c.seed = seed;
  return c;
}

// Party p drops permanently at iteration t_star.
OnlineHistory DropAt(int n, int T, const std::vector<std::pair<int, int>>& drops) {
  OnlineHistory h = OnlineHistory::AllOnline(n, T);
  for (auto [p, t_star] : drops) {
    for (int t = t_star; t <= T; ++t) h.online[t][p] = 0;
  }
  return h;
}

TEST(SplitTest, IncrementalMatchesClosedForm) {
  NoiseSplit s = MakeIncremental(2, 1.0);
  EXPECT_TRUE(s.c.isApprox(Vec({1.0 / 3, 1.0 / 3, 1.0 / 3})));
  Eigen::MatrixXd z(3, 2);
  z << 1, 0, -1, 1, 0, -1;
  EXPECT_EQ(s.z, z);
  EXPECT_TRUE(IsValidSplit(s));
}

TEST(SplitTest, EarlyMatchesClosedForm) {
  NoiseSplit s = MakeEarly(2, 1.0);
  EXPECT_EQ(s.c, Vec({1, 0, 0}));
  Eigen::MatrixXd z(3, 2);
  z << 1, 1, -1, 0, 0, -1;
  EXPECT_EQ(s.z, z);
  EXPECT_TRUE(IsValidSplit(s));
}

TEST(SplitTest, BothSplitsValidForManyHorizons) {
  for (int T = 1; T <= 30; ++T) {
    EXPECT_TRUE(IsValidSplit(MakeEarly(T, 2.0))) << T;
    EXPECT_TRUE(IsValidSplit(MakeIncremental(T, 2.0))) << T;
  }
}

TEST(SplitTest, IncrementalPartsHandExample) {
  Eigen::VectorXd v = SplitParts(MakeIncremental(2, 1.0), 3.0, Vec({0.5, -0.2}));
  EXPECT_NEAR(v(0), 1.5, 1e-15);
  EXPECT_NEAR(v(1), 0.3, 1e-15);
  EXPECT_NEAR(v(2), 1.2, 1e-15);
  EXPECT_NEAR(v.sum(), 3.0, 1e-15);
}

TEST(SplitTest, EarlyPartsHandExample) {
  Eigen::VectorXd v = SplitParts(MakeEarly(2, 1.0), 3.0, Vec({0.5, -0.2}));
  EXPECT_NEAR(v(0), 3.3, 1e-15);
  EXPECT_NEAR(v(1), -0.5, 1e-15);
  EXPECT_NEAR(v(2), 0.2, 1e-15);
}

TEST(SplitTest, ZeroNoisePartsEqualC) {
  SplitMix64 rng(3);
  Eigen::VectorXd v = SampleNoiseSplit(MakeIncremental(2, 0.0), 1.0, rng);
  EXPECT_TRUE(v.isApprox(Vec({1.0 / 3, 1.0 / 3, 1.0 / 3})));
}

TEST(SplitTest, SampledPartsSumToValue) {
  SplitMix64 rng(5);
  for (SplitKind kind : {SplitKind::kEarly, SplitKind::kIncremental}) {
    for (int rep = 0; rep < 50; ++rep) {
      Eigen::VectorXd v = SampleNoiseSplit(MakeSplit(kind, 7, 100.0), 0.7, rng);
      EXPECT_NEAR(v.sum(), 0.7, 1e-11);
    }
  }
}

TEST(SplitTest, InvalidSplitsRejected) {
  NoiseSplit s = MakeIncremental(3, 1.0);
  s.c(0) += 0.1;
  std::string why;
  EXPECT_FALSE(IsValidSplit(s, &why));
  EXPECT_FALSE(why.empty());
  EXPECT_THROW(ValidateSplit(s), ConfigError);

  NoiseSplit t = MakeIncremental(3, 1.0);
  t.z(3, 2) = 0.0;  // column no longer sums to zero
  EXPECT_FALSE(IsValidSplit(t));

  // Z without its last row is singular: a zero canceling term.
  NoiseSplit u = MakeIncremental(2, 1.0);
  u.z.col(1).setZero();
  EXPECT_FALSE(IsValidSplit(u));
}

TEST(SplitTest, KindNamesRoundTrip) {
  for (SplitKind k : {SplitKind::kEarly, SplitKind::kIncremental}) {
    EXPECT_EQ(ParseSplitKind(SplitKindName(k)), k);
  }
  EXPECT_THROW(ParseSplitKind("late"), ConfigError);
  EXPECT_THROW(MakeIncremental(0, 1.0), ConfigError);
}

TEST(AdaptSplitTest, AlwaysOnlineKeepsSplit) {
  for (SplitKind kind : {SplitKind::kEarly, SplitKind::kIncremental}) {
    NoiseSplit s = MakeSplit(kind, 5, 1.0);
    AdaptedSplit a = AdaptSplit(s, std::vector<char>(6, 1));
    EXPECT_TRUE(a.c.isApprox(s.c));
    EXPECT_TRUE(a.z.isApprox(s.z));
    EXPECT_NEAR(a.Weight(), 1.0, 1e-15);
  }
}

TEST(AdaptSplitTest, TemporaryDropoutWeight) {
  AdaptedSplit a = AdaptSplit(MakeIncremental(4, 1.0), {1, 1, 1, 0, 1});
  EXPECT_NEAR(a.Weight(), 0.8, 1e-15);
  EXPECT_EQ(a.z.row(3).norm(), 0.0);
  // The final row cancels everything injected before.
  EXPECT_NEAR(a.z.colwise().sum().norm(), 0.0, 1e-15);
}

TEST(AdaptSplitTest, PermanentDropoutWeight) {
  AdaptedSplit a = AdaptSplit(MakeIncremental(4, 1.0), {1, 1, 0, 0, 0});
  EXPECT_NEAR(a.Weight(), 0.4, 1e-15);
  for (int t = 2; t <= 4; ++t) {
    EXPECT_EQ(a.z.row(t).norm(), 0.0) << t;
    EXPECT_EQ(a.c(t), 0.0) << t;
  }
  // One canceling term (the one injected at t = 1) stays uncanceled.
  EXPECT_NEAR(a.z.colwise().sum().cwiseAbs().sum(), 1.0, 1e-15);
}

TEST(AdaptSplitTest, OfflineAtStartRejected) {
  EXPECT_THROW(AdaptSplit(MakeIncremental(2, 1.0), {0, 1, 1}), ConfigError);
  EXPECT_THROW(AdaptSplit(MakeIncremental(2, 1.0), {1, 1}), ConfigError);
}

TEST(RunIncaTest, TwoPartyHandTrace) {
  SparseMat w(2, 2);
  w.insert(0, 0) = 0.5;
  w.insert(0, 1) = 0.5;
  w.insert(1, 0) = 0.5;
  w.insert(1, 1) = 0.5;
  CommSchedule schedule = StaticSchedule(w, 1);
  ProtocolConfig config = Config(2, 1, 0.0, 0.0, SplitKind::kIncremental, 1);
  Transcript tr = RunInca(config, schedule, OnlineHistory::AllOnline(2, 1),
                          Vec({0.0, 1.0}));
  EXPECT_NEAR(tr.messages(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(tr.messages(0, 1), 0.5, 1e-15);
  EXPECT_NEAR(tr.messages(1, 0), 0.25, 1e-15);
  EXPECT_NEAR(tr.messages(1, 1), 0.75, 1e-15);
  EXPECT_NEAR(tr.messages.row(1).sum(), 1.0, 1e-15);
}

TEST(RunIncaTest, ExactAverageWithoutDropouts) {
  for (SplitKind kind : {SplitKind::kEarly, SplitKind::kIncremental}) {
    for (uint64_t seed = 1; seed <= 5; ++seed) {
      const int n = 50, T = 10;
      ProtocolConfig config = Config(n, T, 4.0, 1e4, kind, seed);
      OnlineHistory h = OnlineHistory::AllOnline(n, T);
      Transcript tr = RunInca(config, RandomKOutSchedule(n, 2, T, seed), h,
                              UniformX(n, seed));
      EXPECT_NEAR(Disseminate(tr, h), tr.inputs_noisy.mean(), 1e-10);
      EXPECT_NEAR(tr.messages.row(T).mean(), tr.inputs_noisy.mean(), 1e-10);
      TranscriptCheck c = CheckTranscript(tr, h);
      EXPECT_LE(c.column_stochastic, 1e-12);
      EXPECT_LE(c.injection, 1e-10);
      EXPECT_LE(c.mass, 1e-9);
    }
  }
}

TEST(RunIncaTest, ZeroNoiseGivesExactMean) {
  const int n = 30, T = 6;
  ProtocolConfig config = Config(n, T, 0.0, 0.0, SplitKind::kIncremental, 9);
  OnlineHistory h = OnlineHistory::AllOnline(n, T);
  Eigen::VectorXd x = UniformX(n, 9);
  Transcript tr = RunInca(config, RandomKOutSchedule(n, 1, T, 9), h, x);
  EXPECT_NEAR(Disseminate(tr, h), x.mean(), 1e-14);
}

TEST(RunIncaTest, InjectionIdentityUnderDropouts) {
  const int n = 40, T = 8;
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    ProtocolConfig config = Config(n, T, 1.0, 50.0, SplitKind::kIncremental, seed);
    OnlineHistory h = SampleDropouts(n, T, 0.25, seed);
    // Add a temporary dropout for a survivor.
    for (int i = 0; i < n; ++i) {
      if (h.Survives(i)) {
        h.online[T / 2][i] = 0;
        break;
      }
    }
    Transcript tr =
        RunInca(config, RandomKOutSchedule(n, 2, T, seed), h, UniformX(n, seed));
    TranscriptCheck c = CheckTranscript(tr, h);
    EXPECT_LE(c.column_stochastic, 1e-12);
    EXPECT_LE(c.injection, 1e-10);
    for (const SparseMat& w : tr.effective_weights) {
      EXPECT_LE(ColumnStochasticError({w}), 1e-12);
    }
  }
}

TEST(RunIncaTest, WeightingRemovesDropoutBias) {
  const int n = 8, T = 4;
  OnlineHistory h = DropAt(n, T, {{0, 2}, {3, 1}, {5, 3}, {6, 4}});
  ProtocolConfig config = Config(n, T, 0.0, 0.0, SplitKind::kIncremental, 2);
  Transcript tr = RunInca(config, RandomKOutSchedule(n, 2, T, 2), h,
                          Eigen::VectorXd::Constant(n, 0.5));
  EXPECT_NEAR(Disseminate(tr, h), 0.5, 1e-14);
}

TEST(RunIncaTest, InjectedWeightsFollowDropoutTime) {
  const int T = 4;
  OnlineHistory h = DropAt(3, T, {{1, 2}});
  Eigen::VectorXd w = InjectedWeights(MakeIncremental(T, 1.0), h);
  EXPECT_NEAR(w(0), 1.0, 1e-15);
  EXPECT_NEAR(w(1), 0.4, 1e-15);
  EXPECT_NEAR(w(2), 1.0, 1e-15);
}

TEST(RunIncaTest, EffectiveWeightsKeepUndeliveredMass) {
  // 0 -> 1 at iteration 1, but 1 is offline then.
  SparseMat base(3, 3);
  base.insert(0, 0) = 0.5;
  base.insert(1, 0) = 0.5;
  base.insert(1, 1) = 0.5;
  base.insert(2, 1) = 0.5;
  base.insert(2, 2) = 0.5;
  base.insert(0, 2) = 0.5;
  CommSchedule s = StaticSchedule(base, 2);
  OnlineHistory h = DropAt(3, 2, {{1, 1}});
  std::vector<SparseMat> eff = EffectiveWeights(s, h);
  Eigen::MatrixXd w1 = Eigen::MatrixXd(eff[0]);
  EXPECT_NEAR(w1(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(w1(1, 0), 0.0, 1e-15);
  // Offline column is the identity.
  EXPECT_NEAR(w1(1, 1), 1.0, 1e-15);
  EXPECT_NEAR(w1(2, 1), 0.0, 1e-15);
  EXPECT_NEAR(w1(0, 2), 0.5, 1e-15);
  EXPECT_LE(ColumnStochasticError(eff), 1e-15);
}

TEST(RunIncaTest, OfflinePartyCarriesValue) {
  const int n = 6, T = 5;
  OnlineHistory h = DropAt(n, T, {{2, 3}});
  ProtocolConfig config = Config(n, T, 1.0, 1.0, SplitKind::kIncremental, 4);
  Transcript tr = RunInca(config, RandomKOutSchedule(n, 1, T, 4), h, UniformX(n, 4));
  for (int t = 3; t <= T; ++t) {
    EXPECT_DOUBLE_EQ(tr.messages(t, 2), tr.messages(2, 2)) << t;
  }
}

TEST(RunIncaTest, NoiseDrawIsDeterministic) {
  ProtocolConfig config = Config(20, 5, 1.0, 1.0, SplitKind::kEarly, 77);
  NoiseDraw a = DrawNoise(config);
  NoiseDraw b = DrawNoise(config);
  EXPECT_EQ(a.independent, b.independent);
  EXPECT_EQ(a.cancel, b.cancel);
  // Party streams are independent of n.
  ProtocolConfig wider = config;
  wider.n = 30;
  NoiseDraw c = DrawNoise(wider);
  EXPECT_EQ(a.independent, c.independent.head(20));
  config.seed = 78;
  EXPECT_NE(a.independent, DrawNoise(config).independent);
}

TEST(RunIncaTest, RejectsBadInputs) {
  const int n = 4, T = 2;
  ProtocolConfig config = Config(n, T, 1.0, 1.0, SplitKind::kIncremental, 1);
  CommSchedule s = RandomKOutSchedule(n, 1, T, 1);
  OnlineHistory h = OnlineHistory::AllOnline(n, T);
  EXPECT_THROW(RunInca(config, s, h, Eigen::VectorXd::Zero(3)), ConfigError);
  EXPECT_THROW(RunInca(config, s, h, Eigen::VectorXd::Constant(n, 2.0)),
               ConfigError);
  CommSchedule bad = s;
  bad.w[0].coeffRef(0, 0) += 0.25;
  EXPECT_THROW(RunInca(config, bad, h, Eigen::VectorXd::Zero(n)), ConfigError);
  ProtocolConfig wrong_t = config;
  wrong_t.T = 3;
  EXPECT_THROW(wrong_t.Validate(), ConfigError);
}

TEST(RunIncaTest, NoSurvivorsIsAnError) {
  const int n = 3, T = 2;
  OnlineHistory h = DropAt(n, T, {{0, 1}, {1, 2}, {2, 2}});
  ProtocolConfig config = Config(n, T, 1.0, 1.0, SplitKind::kIncremental, 1);
  Transcript tr = RunInca(config, RandomKOutSchedule(n, 1, T, 1), h,
                          Eigen::VectorXd::Zero(n));
  EXPECT_THROW(Disseminate(tr, h), std::runtime_error);
}

TEST(RunIncaTest, OutputVarianceMatchesIndependentNoise) {
  const int n = 100, T = 5, trials = 2000;
  const double sigma_ind_sq = 1.0;
  double se = 0.0;
  for (int r = 0; r < trials; ++r) {
    const uint64_t seed = DeriveSeed(11, {static_cast<uint64_t>(r)});
    ProtocolConfig config =
        Config(n, T, sigma_ind_sq, 25.0, SplitKind::kIncremental, seed);
    OnlineHistory h = OnlineHistory::AllOnline(n, T);
    Eigen::VectorXd x = UniformX(n, seed);
    Transcript tr = RunInca(config, RandomKOutSchedule(n, 1, T, seed), h, x);
    const double err = Disseminate(tr, h) - x.mean();
    se += err * err;
  }
  // Standard error of the estimate is sqrt(2 / trials) ~ 3.2%.
  EXPECT_NEAR(se / trials, sigma_ind_sq / n, 0.1 * sigma_ind_sq / n);
}

}  // namespace
}  // namespace inca
