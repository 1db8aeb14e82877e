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
#include <random>
#include <stdexcept>
#include <string>

#include "inca/linalg.h"

namespace inca {

std::string SplitKindName(SplitKind kind) {
  switch (kind) {
    case SplitKind::kEarly:
      return "early";
    case SplitKind::kIncremental:
      return "incremental";
    case SplitKind::kCustom:
      return "custom";
  }
  return "custom";
}

SplitKind ParseSplitKind(const std::string& name) {
  if (name == "early") return SplitKind::kEarly;
  if (name == "incremental") return SplitKind::kIncremental;
  if (name == "custom") return SplitKind::kCustom;
  throw ConfigError("unknown split kind: " + name);
}

NoiseSplit MakeEarly(int T, double sigma_delta_sq) {
  if (T < 1) throw ConfigError("T must be at least 1");
  NoiseSplit s;
  s.kind = SplitKind::kEarly;
  s.sigma_delta_sq = sigma_delta_sq;
  s.c = Eigen::VectorXd::Zero(T + 1);
  s.c(0) = 1.0;
  s.z = Eigen::MatrixXd::Zero(T + 1, T);
  s.z.row(0).setOnes();
  for (int t = 1; t <= T; ++t) s.z(t, t - 1) = -1.0;
  return s;
}

NoiseSplit MakeIncremental(int T, double sigma_delta_sq) {
  if (T < 1) throw ConfigError("T must be at least 1");
  NoiseSplit s;
  s.kind = SplitKind::kIncremental;
  s.sigma_delta_sq = sigma_delta_sq;
  s.c = Eigen::VectorXd::Constant(T + 1, 1.0 / (T + 1));
  s.z = Eigen::MatrixXd::Zero(T + 1, T);
  // eta_k enters at t = k - 1 and leaves at t = k.
  for (int k = 1; k <= T; ++k) {
    s.z(k - 1, k - 1) = 1.0;
    s.z(k, k - 1) = -1.0;
  }
  return s;
}

NoiseSplit MakeSplit(SplitKind kind, int T, double sigma_delta_sq) {
  switch (kind) {
    case SplitKind::kEarly:
      return MakeEarly(T, sigma_delta_sq);
    case SplitKind::kIncremental:
      return MakeIncremental(T, sigma_delta_sq);
    case SplitKind::kCustom:
      break;
  }
  throw ConfigError("custom splits need explicit c and Z");
}

bool IsValidSplit(const NoiseSplit& split, std::string* why) {
  auto fail = [why](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  const int T = split.T();
  if (T < 1) return fail("T must be at least 1");
  if (split.z.rows() != T + 1 || split.z.cols() != T) {
    return fail("Z must be (T+1) x T");
  }
  if (!(split.sigma_delta_sq >= 0.0)) return fail("negative variance");
  if (std::abs(split.c.sum() - 1.0) > 1e-12) return fail("c does not sum to 1");
  Eigen::VectorXd col_sums = split.z.colwise().sum().transpose();
  if (col_sums.cwiseAbs().maxCoeff() > 1e-12) {
    return fail("a column of Z does not sum to 0");
  }
  Eigen::MatrixXd cz(T + 1, T + 1);
  cz << split.c, split.z;
  if (NumericalRank(cz, 1e-9) != T + 1) return fail("[c | Z] is singular");
  if (NumericalRank(split.z.topRows(T), 1e-9) != T) {
    return fail("Z without its last row is singular");
  }
  return true;
}

void ValidateSplit(const NoiseSplit& split) {
  std::string why;
  if (!IsValidSplit(split, &why)) throw ConfigError("invalid split: " + why);
}

Eigen::VectorXd SplitParts(const NoiseSplit& split, double u,
                           const Eigen::VectorXd& eta) {
  if (eta.size() != split.T()) throw ConfigError("eta must have length T");
  return split.c * u + split.z * eta;
}

Eigen::VectorXd SampleNoiseSplit(const NoiseSplit& split, double u,
                                 SplitMix64& rng) {
  ValidateSplit(split);
  std::normal_distribution<double> normal(0.0,
                                          std::sqrt(split.sigma_delta_sq));
  Eigen::VectorXd eta(split.T());
  for (int k = 0; k < split.T(); ++k) eta(k) = normal(rng);
  return SplitParts(split, u, eta);
}

AdaptedSplit AdaptSplit(const NoiseSplit& split,
                        const std::vector<char>& online) {
  const int T = split.T();
  if (static_cast<int>(online.size()) != T + 1) {
    throw ConfigError("online flags must cover iterations 0..T");
  }
  if (!online[0]) throw ConfigError("party must be online at iteration 0");
  AdaptedSplit a;
  a.c = Eigen::VectorXd::Zero(T + 1);
  a.z = Eigen::MatrixXd::Zero(T + 1, T);
  // `used` counts online iterations so far; the next online iteration takes
  // row `used` of (c, Z).
  int used = 0;
  for (int t = 0; t < T; ++t) {
    if (!online[t]) continue;
    a.c(t) = split.c(used);
    a.z.row(t) = split.z.row(used);
    ++used;
  }
  if (online[T]) {
    a.c(T) = split.c(used);
    a.z.row(T) = -split.z.topRows(used).colwise().sum();
  }
  return a;
}

Eigen::VectorXd InjectedWeights(const NoiseSplit& split,
                                const OnlineHistory& history) {
  Eigen::VectorXd w(history.n);
  for (int i = 0; i < history.n; ++i) {
    w(i) = AdaptSplit(split, history.PartyFlags(i)).Weight();
  }
  return w;
}

std::vector<SparseMat> EffectiveWeights(const CommSchedule& schedule,
                                        const OnlineHistory& history) {
  if (schedule.n != history.n || schedule.T != history.T) {
    throw ConfigError("schedule and online history disagree on n or T");
  }
  const int n = schedule.n;
  std::vector<SparseMat> out;
  out.reserve(schedule.T);
  std::vector<Eigen::Triplet<double>> trips;
  for (int t = 1; t <= schedule.T; ++t) {
    const SparseMat& w = schedule.At(t);
    trips.clear();
    for (int j = 0; j < n; ++j) {
      if (!history.Online(j, t)) {
        trips.emplace_back(j, j, 1.0);
        continue;
      }
      double diag = 0.0;
      for (SparseMat::InnerIterator it(w, j); it; ++it) {
        const int i = static_cast<int>(it.row());
        if (i != j && history.Online(i, t)) {
          trips.emplace_back(i, j, it.value());
        } else {
          diag += it.value();
        }
      }
      trips.emplace_back(j, j, diag);
    }
    SparseMat m(n, n);
    m.setFromTriplets(trips.begin(), trips.end());
    m.prune(0.0);
    out.push_back(std::move(m));
  }
  return out;
}

void ProtocolConfig::Validate() const {
  if (n < 2) throw ConfigError("n must be at least 2");
  if (T < 1) throw ConfigError("T must be at least 1");
  if (!(sigma_ind_sq >= 0.0)) throw ConfigError("sigma_ind_sq must be >= 0");
  if (split.T() != T) throw ConfigError("split horizon differs from T");
  ValidateSplit(split);
}

NoiseDraw DrawNoise(const ProtocolConfig& config) {
  NoiseDraw d;
  d.independent.resize(config.n);
  d.cancel.resize(config.n, config.T);
  const double sd_ind = std::sqrt(config.sigma_ind_sq);
  const double sd_cancel = std::sqrt(config.split.sigma_delta_sq);
  for (int i = 0; i < config.n; ++i) {
    SplitMix64 rng(DeriveSeed(config.seed, Stream::kNoise,
                              {static_cast<uint64_t>(i)}));
    std::normal_distribution<double> normal;
    d.independent(i) = sd_ind * normal(rng);
    for (int k = 0; k < config.T; ++k) d.cancel(i, k) = sd_cancel * normal(rng);
  }
  return d;
}

Transcript RunInca(const ProtocolConfig& config, const CommSchedule& schedule,
                   const OnlineHistory& history, const Eigen::VectorXd& x,
                   const NoiseDraw& noise) {
  config.Validate();
  history.Validate();
  const int n = config.n;
  const int T = config.T;
  if (schedule.n != n || schedule.T != T || history.n != n || history.T != T ||
      static_cast<int>(schedule.w.size()) != T) {
    throw ConfigError("dimension mismatch between config, schedule, history");
  }
  if (x.size() != n || noise.independent.size() != n ||
      noise.cancel.rows() != n || noise.cancel.cols() != T) {
    throw ConfigError("dimension mismatch in inputs or noise");
  }
  if ((x.array() < 0.0).any() || (x.array() > 1.0).any()) {
    throw ConfigError("inputs must lie in [0, 1]");
  }
  if (ColumnStochasticError(schedule.w) > 1e-12) {
    throw ConfigError("schedule is not column stochastic");
  }

  Transcript tr;
  tr.n = n;
  tr.T = T;
  tr.inputs = x;
  tr.inputs_noisy = x + noise.independent;
  tr.cancel_noise = noise.cancel;
  tr.effective_weights = EffectiveWeights(schedule, history);
  tr.parts.resize(T + 1, n);
  tr.injected_weight.resize(n);
  Eigen::MatrixXd coeff(T + 1, n);
  for (int i = 0; i < n; ++i) {
    AdaptedSplit a = AdaptSplit(config.split, history.PartyFlags(i));
    tr.parts.col(i) =
        a.c * tr.inputs_noisy(i) + a.z * noise.cancel.row(i).transpose();
    coeff.col(i) = a.c;
    tr.injected_weight(i) = a.Weight();
  }

  tr.messages.resize(T + 1, n);
  Eigen::VectorXd y = tr.parts.row(0).transpose();
  Eigen::VectorXd omega = coeff.row(0).transpose();
  tr.messages.row(0) = y.transpose();
  for (int t = 1; t <= T; ++t) {
    const SparseMat& wu = tr.effective_weights[t - 1];
    y = wu * y + tr.parts.row(t).transpose();
    omega = wu * omega + coeff.row(t).transpose();
    tr.messages.row(t) = y.transpose();
  }
  tr.tracked_weight = omega;
  return tr;
}

Transcript RunInca(const ProtocolConfig& config, const CommSchedule& schedule,
                   const OnlineHistory& history, const Eigen::VectorXd& x) {
  config.Validate();
  return RunInca(config, schedule, history, x, DrawNoise(config));
}

double Disseminate(const Transcript& transcript, const OnlineHistory& history,
                   Dissemination rule) {
  double num = 0.0;
  double den = 0.0;
  int survivors = 0;
  for (int i = 0; i < transcript.n; ++i) {
    if (!history.Survives(i)) continue;
    ++survivors;
    num += transcript.messages(transcript.T, i);
    den += rule == Dissemination::kTrackedWeight
               ? transcript.tracked_weight(i)
               : transcript.injected_weight(i);
  }
  if (survivors == 0) throw std::runtime_error("no survivors to disseminate");
  if (den <= 0.0) throw std::runtime_error("survivors carry no weight");
  return num / den;
}

TranscriptCheck CheckTranscript(const Transcript& transcript,
                                const OnlineHistory& history) {
  TranscriptCheck check;
  check.column_stochastic = ColumnStochasticError(transcript.effective_weights);
  bool all_online = true;
  for (int t = 0; t <= transcript.T; ++t) {
    for (int i = 0; i < transcript.n; ++i) all_online &= history.Online(i, t);
  }
  for (int i = 0; i < transcript.n; ++i) {
    if (!history.Survives(i)) continue;
    double injected = transcript.parts.col(i).sum();
    double expect =
        transcript.injected_weight(i) * transcript.inputs_noisy(i);
    check.injection = std::max(check.injection, std::abs(injected - expect));
  }
  if (all_online) {
    for (int t = 1; t <= transcript.T; ++t) {
      double diff = transcript.messages.row(t).sum() -
                    transcript.messages.row(t - 1).sum() -
                    transcript.parts.row(t).sum();
      check.mass = std::max(check.mass, std::abs(diff));
    }
  }
  return check;
}

}  // namespace inca
