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

#ifndef INCA_PROTOCOL_H_
#define INCA_PROTOCOL_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "inca/rng.h"
#include "inca/types.h"

namespace inca {

enum class SplitKind { kEarly, kIncremental, kCustom };

std::string SplitKindName(SplitKind kind);
SplitKind ParseSplitKind(const std::string& name);

// A (c, Z)-Gaussian: v_t = c_t u + sum_k Z(t, k-1) eta_k, t in [0, T],
// with eta_k ~ N(0, sigma_delta_sq) independent.
struct NoiseSplit {
  Eigen::VectorXd c;  // T + 1
  Eigen::MatrixXd z;  // (T + 1) x T
  double sigma_delta_sq = 0.0;
  SplitKind kind = SplitKind::kCustom;

  int T() const { return static_cast<int>(c.size()) - 1; }
};

NoiseSplit MakeEarly(int T, double sigma_delta_sq);
NoiseSplit MakeIncremental(int T, double sigma_delta_sq);
NoiseSplit MakeSplit(SplitKind kind, int T, double sigma_delta_sq);

// Checks sum(c) = 1, zero column sums of Z, and the two rank conditions.
// Returns false and fills `why` on failure.
bool IsValidSplit(const NoiseSplit& split, std::string* why = nullptr);
// Throws ConfigError when IsValidSplit fails.
void ValidateSplit(const NoiseSplit& split);

// The T + 1 parts for a given canceling-noise vector (length T).
Eigen::VectorXd SplitParts(const NoiseSplit& split, double u,
                           const Eigen::VectorXd& eta);
// Same, drawing eta ~ N(0, sigma_delta_sq) from `rng`.
Eigen::VectorXd SampleNoiseSplit(const NoiseSplit& split, double u,
                                 SplitMix64& rng);

// Per-party split after accounting for its online history.
struct AdaptedSplit {
  Eigen::VectorXd c;  // T + 1, zero where offline
  Eigen::MatrixXd z;  // (T + 1) x T, zero rows where offline
  double Weight() const { return c.sum(); }
};

// `online` has T + 1 flags and online[0] must be set.
AdaptedSplit AdaptSplit(const NoiseSplit& split,
                        const std::vector<char>& online);

// w_i for every party.
Eigen::VectorXd InjectedWeights(const NoiseSplit& split,
                                const OnlineHistory& history);

// W^U_1..W^U_T. Weight that an online sender addressed to an offline
// receiver stays on the sender's diagonal; offline parties keep their value.
std::vector<SparseMat> EffectiveWeights(const CommSchedule& schedule,
                                        const OnlineHistory& history);

struct ProtocolConfig {
  int n = 0;
  int T = 0;
  double sigma_ind_sq = 0.0;
  NoiseSplit split;
  uint64_t seed = 0;

  void Validate() const;
};

// The randomness of one run: eta_i and eta_{i,k}.
struct NoiseDraw {
  Eigen::VectorXd independent;  // n
  Eigen::MatrixXd cancel;       // n x T
};

// Party i draws eta_i then eta_{i,1..T} from its own stream, so the draw does
// not depend on the order parties are visited in.
NoiseDraw DrawNoise(const ProtocolConfig& config);

struct Transcript {
  int n = 0;
  int T = 0;
  Eigen::MatrixXd messages;  // (T + 1) x n, messages(t, i) = y_i^(t)
  Eigen::MatrixXd parts;     // (T + 1) x n, parts(t, i) = v_i^(t)
  std::vector<SparseMat> effective_weights;
  Eigen::VectorXd injected_weight;  // w
  Eigen::VectorXd tracked_weight;   // weight carried by each y_i^(T)
  Eigen::VectorXd inputs;           // x
  Eigen::VectorXd inputs_noisy;     // x + eta
  Eigen::MatrixXd cancel_noise;     // n x T
};

Transcript RunInca(const ProtocolConfig& config, const CommSchedule& schedule,
                   const OnlineHistory& history, const Eigen::VectorXd& x,
                   const NoiseDraw& noise);
Transcript RunInca(const ProtocolConfig& config, const CommSchedule& schedule,
                   const OnlineHistory& history, const Eigen::VectorXd& x);

enum class Dissemination {
  // sum_{U_T} y / sum_{U_T} of the weight tracked alongside each message.
  kTrackedWeight,
  // sum_{U_T} y / sum_{U_T} w_i.
  kInjectedWeight,
};

// Throws std::runtime_error when U_T is empty.
double Disseminate(const Transcript& transcript, const OnlineHistory& history,
                   Dissemination rule = Dissemination::kTrackedWeight);

struct TranscriptCheck {
  double column_stochastic = 0.0;  // max |1 - column sum| of W^U
  double injection = 0.0;          // max over U_T of |sum_t v - w (x + eta)|
  double mass = 0.0;               // per-step conservation, no dropouts only
};

TranscriptCheck CheckTranscript(const Transcript& transcript,
                                const OnlineHistory& history);

}  // namespace inca

#endif  // INCA_PROTOCOL_H_
