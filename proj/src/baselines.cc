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

#include "inca/baselines.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <set>

#include "inca/rng.h"
#include "inca/topology.h"

namespace inca {

double CentralDpMse(int n, double epsilon, double delta) {
  if (n < 1) throw ConfigError("n must be positive");
  return GaussianFactor(delta) / (epsilon * epsilon * n * static_cast<double>(n));
}

double LocalDpMse(int n, double epsilon, double delta) {
  return n * CentralDpMse(n, epsilon, delta);
}

double MuffliatoSigmaSq(int n, int degree, int iterations, double epsilon,
                        double delta, double eps_bar) {
  const double alpha = std::log(1.0 / delta) / (epsilon - eps_bar) + 1.0;
  return alpha * degree * iterations / (2.0 * n * eps_bar);
}

MuffliatoResult MuffliatoMse(int n, double epsilon, double delta) {
  if (!(epsilon > 0.0) || !(delta > 0.0 && delta < 1.0)) {
    throw ConfigError("invalid privacy budget");
  }
  Hypercube cube = HypercubeGossip(n);
  MuffliatoResult r;
  r.degree = cube.degree;
  r.lambda2 = cube.lambda2;
  r.iterations = static_cast<int>(
      std::ceil(std::log(static_cast<double>(n)) / std::sqrt(cube.lambda2)));
  auto f = [&](double e) {
    return MuffliatoSigmaSq(n, r.degree, r.iterations, epsilon, delta, e);
  };
  // Golden-section search; f is unimodal on the open interval.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 1e-6;
  double b = epsilon - 1e-6;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > 1e-9 * (std::abs(a) + std::abs(b))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  r.eps_bar = 0.5 * (a + b);
  r.sigma_sq = f(r.eps_bar);
  r.alpha = std::log(1.0 / delta) / (epsilon - r.eps_bar) + 1.0;
  r.mse = r.sigma_sq / n;
  return r;
}

PairGraph RandomPairGraph(int n, int k, uint64_t seed) {
  if (n < 2 || k < 1 || k > n - 1) throw ConfigError("need 1 <= k <= n-1");
  std::set<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    SplitMix64 rng(DeriveSeed(seed, Stream::kGopa,
                              {0, static_cast<uint64_t>(i)}));
    for (int c : SampleWithoutReplacement(n - 1, k, rng)) {
      const int j = c < i ? c : c + 1;
      edges.emplace(std::min(i, j), std::max(i, j));
    }
  }
  PairGraph g;
  g.n = n;
  g.edges.assign(edges.begin(), edges.end());
  return g;
}

PairGraph CompletePairGraph(int n) {
  PairGraph g;
  g.n = n;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) g.edges.emplace_back(i, j);
  }
  return g;
}

double PairwiseVariance(const PairGraph& graph,
                        const std::vector<char>& corrupted,
                        const PrivacyBudget& budget, double sigma_ind_sq) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<int> pos(graph.n, -1);
  int nh = 0;
  for (int i = 0; i < graph.n; ++i) {
    if (!corrupted[i]) pos[i] = nh++;
  }
  if (nh == 0) return inf;
  const double margin = budget.Cap() - 1.0 / (nh * sigma_ind_sq);
  if (!(margin > 0.0)) return inf;
  if (nh == 1) return 0.0;

  Eigen::MatrixXd lap = Eigen::MatrixXd::Constant(nh, nh, 1.0 / nh);
  std::vector<std::vector<int>> adj(nh);
  for (const auto& [i, j] : graph.edges) {
    const int a = pos[i];
    const int b = pos[j];
    if (a < 0 || b < 0) continue;
    lap(a, a) += 1.0;
    lap(b, b) += 1.0;
    lap(a, b) -= 1.0;
    lap(b, a) -= 1.0;
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<char> seen(nh, 0);
  std::deque<int> queue = {0};
  seen[0] = 1;
  int reached = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int u : adj[v]) {
      if (!seen[u]) {
        seen[u] = 1;
        ++reached;
        queue.push_back(u);
      }
    }
  }
  if (reached != nh) return inf;

  // For v = e_i - 1/nh, v^T L^+ v = [(L + 11^T/nh)^{-1}]_ii - 1/nh.
  Eigen::LLT<Eigen::MatrixXd> llt(lap);
  if (llt.info() != Eigen::Success) return inf;
  Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(nh, nh));
  const double worst = inv.diagonal().maxCoeff() - 1.0 / nh;
  return std::max(0.0, worst) / margin;
}

double CompletePairwiseVariance(int n_honest, const PrivacyBudget& budget,
                                double sigma_ind_sq) {
  const double margin = budget.Cap() - 1.0 / (n_honest * sigma_ind_sq);
  if (!(margin > 0.0)) return std::numeric_limits<double>::infinity();
  return (1.0 - 1.0 / n_honest) / n_honest / margin;
}

GopaRun GopaSimulate(const PairGraph& graph, const Eigen::VectorXd& x,
                     double gamma, double gamma2, double sigma_pair_sq,
                     double sigma_ind_sq, uint64_t seed) {
  const int n = graph.n;
  if (x.size() != n) throw ConfigError("x must have n entries");
  if (!(gamma >= 0.0 && gamma < 1.0) || !(gamma2 >= 0.0 && gamma2 <= gamma)) {
    throw ConfigError("need 0 <= gamma2 <= gamma < 1");
  }
  const int total = CountOf(gamma, n);
  const int late = std::min(CountOf(gamma2, n), total);
  const int early = total - late;

  // 0: publishes and rolls back, 1: drops before publishing, 2: drops during
  // rollback.
  std::vector<int> state(n, 0);
  SplitMix64 pick(DeriveSeed(seed, Stream::kGopa, {1}));
  for (int i : SampleWithoutReplacement(n, early, pick)) state[i] = 1;
  std::vector<int> survivors;
  for (int i = 0; i < n; ++i) {
    if (state[i] == 0) survivors.push_back(i);
  }
  for (int s : SampleWithoutReplacement(static_cast<int>(survivors.size()),
                                        late, pick)) {
    state[survivors[s]] = 2;
  }

  SplitMix64 noise(DeriveSeed(seed, Stream::kGopa, {2}));
  std::normal_distribution<double> normal;
  const double sd_ind = std::sqrt(sigma_ind_sq);
  const double sd_pair = std::sqrt(sigma_pair_sq);
  Eigen::VectorXd value(n);
  for (int i = 0; i < n; ++i) value(i) = x(i) + sd_ind * normal(noise);
  GopaRun run;
  for (const auto& [i, j] : graph.edges) {
    const double mask = sd_pair * normal(noise);
    // Masks between two publishers cancel in the sum; masks with a
    // first-round dropout are rolled back unless the publisher leaves too.
    value(i) += mask;
    value(j) -= mask;
    if (state[i] == 1 && state[j] == 0) value(j) += mask;
    if (state[j] == 1 && state[i] == 0) value(i) -= mask;
    if ((state[i] == 1 && state[j] == 2) || (state[i] == 2 && state[j] == 1)) {
      ++run.uncanceled_masks;
    }
  }
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (state[i] == 1) continue;
    sum += value(i);
    ++run.published;
  }
  if (run.published == 0) throw std::runtime_error("no published values");
  const double p = run.published;
  run.estimate = sum / p;
  run.truth = x.mean();
  run.squared_error = (run.estimate - run.truth) * (run.estimate - run.truth);
  run.uncanceled_variance =
      (p * sigma_ind_sq + run.uncanceled_masks * sigma_pair_sq) / (p * p);
  return run;
}

double CorDpDmeBound(int n, double gamma, double sigma_pair_sq,
                     double sigma_ind_sq) {
  const int dropped = CountOf(gamma, n);
  const double survivors = n - dropped;
  if (!(survivors > 0)) throw ConfigError("no survivors");
  return sigma_ind_sq / survivors + dropped * sigma_pair_sq / survivors;
}

}  // namespace inca
