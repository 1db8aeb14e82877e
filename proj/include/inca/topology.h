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

#ifndef INCA_TOPOLOGY_H_
#define INCA_TOPOLOGY_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "inca/types.h"

namespace inca {

// Every party sends to k distinct others per iteration with weight 1/(k+1)
// and keeps 1/(k+1). Iteration t of a schedule only depends on (seed, t),
// and the k targets are a prefix of a per-(seed, t, party) permutation, so
// schedules for a longer horizon or a larger k extend shorter ones.
//
// distinct: a party never reuses a target across iterations (needs
// k * T <= n - 1).
CommSchedule RandomKOutSchedule(int n, int k, int T, uint64_t seed,
                                bool distinct = false);

// Out-neighbors of party i in W_t (j != i with W_t(j, i) > 0).
std::vector<int> OutNeighbors(const SparseMat& w, int i);

// Replicates `base` T times.
CommSchedule StaticSchedule(const SparseMat& base, int T);

// Ring where party i sends half of its value to i + 1.
SparseMat RingMatrix(int n);

// Exactly CountOf(gamma, n) parties drop out permanently, each at a uniform
// iteration t* in [1, T].
OnlineHistory SampleDropouts(int n, int T, double gamma, uint64_t seed);

// Unobserved honest-to-honest deliveries: i -> j whenever W^U_{t+1}(j, i) > 0
// and (i, t) is hidden, for t in [0, T-1].
struct HiddenGraph {
  std::vector<int> vertices;  // honest parties, ascending
  std::vector<std::vector<int>> adjacency;  // by vertex position
  int EdgeCount() const;
};

HiddenGraph BuildHiddenGraph(const std::vector<SparseMat>& effective,
                             const OnlineHistory& history,
                             const AdversaryView& view);
HiddenGraph BuildHiddenGraph(const CommSchedule& schedule,
                             const OnlineHistory& history,
                             const AdversaryView& view);

// Forward and backward search from one vertex, linear time. A single vertex
// is strongly connected; the empty graph is not.
bool IsStronglyConnected(const HiddenGraph& graph);

struct Hypercube {
  SparseMat w;  // (I + A) / (d + 1)
  int degree = 0;
  double lambda2 = 0.0;
};

// n must be a power of two. lambda2 comes from the closed-form spectrum
// (d - 2j + 1) / (d + 1).
Hypercube HypercubeGossip(int n);

// 64-bit FNV-style digest over the sparsity pattern and weights.
uint64_t ScheduleDigest(const CommSchedule& schedule);

// Draws `count` distinct values from [0, range) uniformly; sparse
// Fisher-Yates, O(count) memory. Prefixes are stable across counts.
template <typename Rng>
std::vector<int> SampleWithoutReplacement(int range, int count, Rng& rng);

}  // namespace inca

#include "inca/topology_impl.h"

#endif  // INCA_TOPOLOGY_H_
