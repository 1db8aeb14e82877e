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

#ifndef INCA_ACCOUNTANT_H_
#define INCA_ACCOUNTANT_H_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "inca/adversary.h"
#include "inca/linalg.h"
#include "inca/topology.h"
#include "inca/types.h"

namespace inca {

struct PrivacyBudget {
  double epsilon = 0.0;
  double delta = 0.0;
  double c_sq = 0.0;

  // c_sq defaults to 2 ln(1.25 / delta) (1 + 1e-9).
  static PrivacyBudget Make(double epsilon, double delta);
  static PrivacyBudget Make(double epsilon, double delta, double c_sq);
  // epsilon^2 / c^2
  double Cap() const { return epsilon * epsilon / c_sq; }
  void Validate() const;
};

// 2 ln(1.25 / delta).
double GaussianFactor(double delta);

struct EdgeVector {
  int party = 0;
  int iteration = 0;
  Eigen::VectorXd zeta;        // length n
  std::vector<int> receivers;  // j != party with W^U_{t+1}(j, party) > 0
};

struct EdgeVectorSet {
  int n = 0;
  std::vector<EdgeVector> vectors;
  // Hidden pairs skipped because a referenced injected weight is zero.
  std::vector<std::pair<int, int>> excluded;
};

// One vector per hidden pair (i, t): i honest, t < T, (i, t) unobserved and
// i in U_t.
EdgeVectorSet EdgeVectors(const std::vector<SparseMat>& effective,
                          const OnlineHistory& history,
                          const AdversaryView& view,
                          const Eigen::VectorXd& w);

// Keeps pairs with i in J and every receiver in J.
EdgeVectorSet RestrictToCoalition(const EdgeVectorSet& edges,
                                  const std::vector<char>& in_coalition);

int RankCount(const EdgeVectorSet& edges, double tol = 1e-9);

// Least-squares residual of N u = -L (beta zeta') where zeta' is zeta on the
// honest coordinates of the system.
double NullspaceResidual(const AdversarySystem& system,
                         const Eigen::VectorXd& zeta, double beta = 1.0);

enum class Theorem { kNoDrop, kTotalSum, kCoalition };
std::string TheoremName(Theorem theorem);
Theorem ParseTheorem(const std::string& name);

enum class CalibrationStatus {
  kOk,
  kRankPrecondition,   // too few independent edge vectors
  kBelowBound,         // supplied sigma_ind_sq does not exceed the bound
  kNonPositiveMargin,  // eps^2/c^2 - |Delta^eta|^2 / sigma_ind_sq <= 0
  kInconsistent,       // least-squares residual above tolerance
};
std::string StatusName(CalibrationStatus status);

struct CalibrationOptions {
  Theorem theorem = Theorem::kNoDrop;
  // <= 0 means alpha times the theorem bound.
  double sigma_ind_sq = 0.0;
  double alpha = 1.3;
  double rank_tol = 1e-9;
  double residual_tol = 1e-8;
  // Normal equations are used above this many entries of N.
  long orthogonal_limit = 400000;
};

struct CalibrationResult {
  bool ok = false;
  CalibrationStatus status = CalibrationStatus::kOk;
  Theorem theorem = Theorem::kNoDrop;
  int rank = 0;
  int required_rank = 0;
  int coalition_size = 0;
  double w_u = 0.0;
  double sigma_ind_sq_bound = 0.0;
  double sigma_ind_sq = 0.0;
  double sigma_delta_sq = 0.0;
  double delta_eta_norm_sq = 0.0;    // at the binding target
  double delta_strip_norm_sq = 0.0;  // at the binding target
  int binding_party = -1;
  double max_residual = 0.0;
};

CalibrationResult Calibrate(const PrivacyBudget& budget,
                            const AdversarySystem& system,
                            const EdgeVectorSet& edges,
                            const Eigen::VectorXd& w,
                            const OnlineHistory& history,
                            const CalibrationOptions& options);

// Noise-difference quantity
// |Delta^eta|^2 / sigma_ind_sq + |Delta|^2 / sigma_delta_sq at the binding
// target of a result.
double NoiseDifferenceQuantity(const CalibrationResult& result);

// Abstract DP check: h^T Sigma^{-1} h <= eps^2 / c^2 for every column h of L
// with Sigma = sigma_ind_sq L L^T + sigma_delta_sq N N^T. `worst` receives the
// largest quadratic form. Throws ConditioningError if Sigma is singular.
bool AbstractDpCheck(const PrivacyBudget& budget, const AdversarySystem& system,
                     double sigma_ind_sq, double sigma_delta_sq,
                     double* worst = nullptr);

// [[Sigma, h], [h^T, eps^2/c^2]] is PSD for every column h of L, where
// Sigma = [L | N] diag(sigma_e) [L | N]^T. sigma_e has n^H + n^H T entries.
bool SdpFeasibilityCheck(const PrivacyBudget& budget,
                         const AdversarySystem& system,
                         const Eigen::VectorXd& sigma_e);

// Smallest eigenvalue of the Jacobi-scaled block matrix [[sigma, h],
// [h^T, cap]]; -infinity when a zero diagonal meets a nonzero row.
double BlockMinEigenvalue(const Eigen::MatrixXd& sigma, const Eigen::VectorXd& h,
                          double cap);

// Static effective weights and two honest parties observed at every
// iteration. When true the edge vectors have rank below n^H - 1.
bool StaticNegativeHypothesis(const std::vector<SparseMat>& effective,
                              const AdversaryView& view);

// False only on a contradiction: strongly connected hidden graph but rank
// below n^H - 1.
bool SufficiencyByConnectivity(const HiddenGraph& graph,
                               const EdgeVectorSet& edges,
                               double tol = 1e-9);

}  // namespace inca

#endif  // INCA_ACCOUNTANT_H_
