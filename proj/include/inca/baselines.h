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

#ifndef INCA_BASELINES_H_
#define INCA_BASELINES_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "inca/accountant.h"

namespace inca {

// 2 ln(1.25/delta) / (epsilon^2 n^2).
double CentralDpMse(int n, double epsilon, double delta);
// n times the central error.
double LocalDpMse(int n, double epsilon, double delta);

struct MuffliatoResult {
  double sigma_sq = 0.0;  // sigma_M^2
  int iterations = 0;     // T_M
  double mse = 0.0;       // sigma_M^2 / n
  double eps_bar = 0.0;   // minimizer
  double alpha = 0.0;     // Renyi order at the minimizer
  int degree = 0;
  double lambda2 = 0.0;
};

// Hypercube Muffliato accounting; n a power of two.
MuffliatoResult MuffliatoMse(int n, double epsilon, double delta);

// sigma_M^2 for a given eps_bar.
double MuffliatoSigmaSq(int n, int degree, int iterations, double epsilon,
                        double delta, double eps_bar);

// Undirected pairwise-mask graph: each party picks k partners uniformly.
struct PairGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // i < j, unique
};

PairGraph RandomPairGraph(int n, int k, uint64_t seed);
PairGraph CompletePairGraph(int n);

// Smallest pairwise variance for which every honest target is covered by
// mask changes along honest-honest edges, with Delta^eta = -1/n^H on honest
// parties. Returns +infinity when the honest subgraph is disconnected or the
// margin eps^2/c^2 - 1/(n^H sigma_ind_sq) is not positive.
double PairwiseVariance(const PairGraph& graph,
                        const std::vector<char>& corrupted,
                        const PrivacyBudget& budget, double sigma_ind_sq);

// Closed form of PairwiseVariance on a complete graph with n_honest honest
// parties.
double CompletePairwiseVariance(int n_honest, const PrivacyBudget& budget,
                                double sigma_ind_sq);

struct GopaRun {
  double estimate = 0.0;
  double truth = 0.0;             // mean of x over all parties
  double squared_error = 0.0;
  double uncanceled_variance = 0.0;  // variance of the estimate's noise
  int published = 0;
  int uncanceled_masks = 0;
};

// Two rounds: CountOf(gamma, n) - CountOf(gamma2, n) parties drop before
// publishing; CountOf(gamma2, n) publishers drop during rollback and leave
// their masks with first-round dropouts uncanceled.
GopaRun GopaSimulate(const PairGraph& graph, const Eigen::VectorXd& x,
                     double gamma, double gamma2, double sigma_pair_sq,
                     double sigma_ind_sq, uint64_t seed);

// sigma_ind^2 / n_s + D sigma_pair^2 / n_s with D = CountOf(gamma, n) and
// n_s = n - D: complete-graph masks, no rollback, missing values ignored.
double CorDpDmeBound(int n, double gamma, double sigma_pair_sq,
                     double sigma_ind_sq);

}  // namespace inca

#endif  // INCA_BASELINES_H_
