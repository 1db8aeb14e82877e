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

#ifndef INCA_ADVERSARY_H_
#define INCA_ADVERSARY_H_

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "inca/protocol.h"
#include "inca/types.h"

namespace inca {

// Final messages plus, for each t in [0, T-1], CountOf(fraction, n) message
// values sampled uniformly without replacement. Iteration t draws from its
// own stream so the view is stable when T grows.
AdversaryView BuildEavesdropView(int n, int T, double fraction, uint64_t seed);

// CountOf(rho, n) parties chosen uniformly.
std::vector<char> SampleCorrupted(int n, double rho, uint64_t seed);

// (i, t) is observed when i is corrupted or y_i^(t) was delivered to a
// corrupted party at t + 1; all final messages are observed.
AdversaryView BuildCollusionView(const std::vector<SparseMat>& effective,
                                 const OnlineHistory& history,
                                 const std::vector<char>& corrupted);
AdversaryView BuildCollusionView(const CommSchedule& schedule,
                                 const OnlineHistory& history,
                                 const std::vector<char>& corrupted);

enum class RowReduction {
  kNone,        // every observed row
  kStructural,  // drop corrupted, duplicate (offline) and zero rows
  kQr,          // structural, then column-pivoted QR with tolerance 1e-9
};

// L (x^H + eta^H) + N eta^H = y_V.
struct AdversarySystem {
  std::vector<int> honest;      // ascending; column h of L is honest[h]
  int T = 0;
  Eigen::MatrixXd l;            // m x n^H
  Eigen::MatrixXd n;            // m x n^H T, column h * T + (k - 1)
  Eigen::VectorXd y;            // m, empty when built without a transcript
  std::vector<std::pair<int, int>> rows;  // (party, iteration) per row

  int m() const { return static_cast<int>(l.rows()); }
  int HonestCount() const { return static_cast<int>(honest.size()); }
  Eigen::MatrixXd Stacked() const;  // [L | N]
};

struct SystemOptions {
  RowReduction reduction = RowReduction::kQr;
  double qr_tolerance = 1e-9;
};

// Unrolls the vectorized recursion over the observed rows. With a transcript
// the observed vector is filled and corrupted contributions are subtracted.
AdversarySystem BuildLinearSystem(const std::vector<SparseMat>& effective,
                                  const OnlineHistory& history,
                                  const NoiseSplit& split,
                                  const AdversaryView& view,
                                  const Transcript* transcript = nullptr,
                                  const SystemOptions& options = {});
AdversarySystem BuildLinearSystem(const CommSchedule& schedule,
                                  const OnlineHistory& history,
                                  const NoiseSplit& split,
                                  const AdversaryView& view,
                                  const Transcript* transcript = nullptr,
                                  const SystemOptions& options = {});

// Honest unknowns in system order: (x + eta restricted to honest, eta^H).
Eigen::VectorXd HiddenValues(const AdversarySystem& system,
                             const Transcript& transcript);

// ||L (x^H + eta^H) + N eta^H - y_V||_inf with the true hidden values.
double ReconstructCheck(const AdversarySystem& system,
                        const Transcript& transcript);

// Solves a square [L | N] for the hidden values; returns x^H + eta^H.
// Throws ConditioningError when the system is not square or is singular.
Eigen::VectorXd RecoverInputs(const AdversarySystem& system);

}  // namespace inca

#endif  // INCA_ADVERSARY_H_
