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

#include "inca/topology.h"

#include <algorithm>
#include <bit>
#include <cstring>
#include <deque>
#include <set>
#include <string>

#include "inca/protocol.h"
#include "inca/rng.h"

namespace inca {
namespace {

// Candidate c in [0, n-2] stands for party c, skipping i.
int SkipSelf(int c, int i) { return c < i ? c : c + 1; }

SparseMat FromTargets(int n, int k,
                      const std::vector<std::vector<int>>& targets) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(n) * (k + 1));
  const double weight = 1.0 / (k + 1);
  for (int i = 0; i < n; ++i) {
    trips.emplace_back(i, i, weight);
    for (int j : targets[i]) trips.emplace_back(j, i, weight);
  }
  SparseMat m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

std::vector<int> Search(const std::vector<std::vector<int>>& adj) {
  std::vector<int> seen(adj.size(), 0);
  std::deque<int> queue = {0};
  seen[0] = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int u : adj[v]) {
      if (!seen[u]) {
        seen[u] = 1;
        queue.push_back(u);
      }
    }
  }
  return seen;
}

}  // namespace

CommSchedule RandomKOutSchedule(int n, int k, int T, uint64_t seed,
                                bool distinct) {
  if (n < 2) throw ConfigError("n must be at least 2");
  if (k < 1 || k > n - 1) throw ConfigError("k must be in [1, n-1]");
  if (T < 1) throw ConfigError("T must be at least 1");
  if (distinct && static_cast<long>(k) * T > n - 1) {
    throw ConfigError("distinct mode needs k * T <= n - 1");
  }
  CommSchedule s;
  s.n = n;
  s.T = T;
  std::vector<std::vector<int>> sequence;
  if (distinct) {
    sequence.resize(n);
    for (int i = 0; i < n; ++i) {
      SplitMix64 rng(DeriveSeed(seed, Stream::kDistinct,
                                {static_cast<uint64_t>(i)}));
      sequence[i] = SampleWithoutReplacement(n - 1, k * T, rng);
    }
  }
  std::vector<std::vector<int>> targets(n);
  for (int t = 1; t <= T; ++t) {
    for (int i = 0; i < n; ++i) {
      std::vector<int> picks;
      if (distinct) {
        picks.assign(sequence[i].begin() + (t - 1) * k,
                     sequence[i].begin() + t * k);
      } else {
        SplitMix64 rng(DeriveSeed(
            seed, Stream::kSchedule,
            {static_cast<uint64_t>(t), static_cast<uint64_t>(i)}));
        picks = SampleWithoutReplacement(n - 1, k, rng);
      }
      for (int& c : picks) c = SkipSelf(c, i);
      targets[i] = std::move(picks);
    }
    s.w.push_back(FromTargets(n, k, targets));
  }
  return s;
}

std::vector<int> OutNeighbors(const SparseMat& w, int i) {
  std::vector<int> out;
  for (SparseMat::InnerIterator it(w, i); it; ++it) {
    if (it.row() != i && it.value() > 0.0) out.push_back(it.row());
  }
  return out;
}

CommSchedule StaticSchedule(const SparseMat& base, int T) {
  if (base.rows() != base.cols()) throw ConfigError("base must be square");
  if (T < 1) throw ConfigError("T must be at least 1");
  if (ColumnStochasticError({base}) > 1e-12) {
    throw ConfigError("base matrix is not column stochastic");
  }
  CommSchedule s;
  s.n = static_cast<int>(base.rows());
  s.T = T;
  s.w.assign(T, base);
  s.is_static = true;
  return s;
}

SparseMat RingMatrix(int n) {
  if (n < 2) throw ConfigError("ring needs n >= 2");
  std::vector<Eigen::Triplet<double>> trips;
  for (int i = 0; i < n; ++i) {
    trips.emplace_back(i, i, 0.5);
    trips.emplace_back((i + 1) % n, i, 0.5);
  }
  SparseMat m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

OnlineHistory SampleDropouts(int n, int T, double gamma, uint64_t seed) {
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw ConfigError("gamma must be in [0, 1)");
  }
  OnlineHistory h = OnlineHistory::AllOnline(n, T);
  SplitMix64 rng(DeriveSeed(seed, Stream::kDropout));
  std::vector<int> dropped = SampleWithoutReplacement(n, CountOf(gamma, n), rng);
  for (int i : dropped) {
    const int t_star = 1 + static_cast<int>(rng.Below(T));
    for (int t = t_star; t <= T; ++t) h.online[t][i] = 0;
  }
  return h;
}

int HiddenGraph::EdgeCount() const {
  int count = 0;
  for (const auto& a : adjacency) count += static_cast<int>(a.size());
  return count;
}

HiddenGraph BuildHiddenGraph(const std::vector<SparseMat>& effective,
                             const OnlineHistory& history,
                             const AdversaryView& view) {
  HiddenGraph g;
  g.vertices = view.Honest();
  std::vector<int> pos(view.n, -1);
  for (size_t v = 0; v < g.vertices.size(); ++v) pos[g.vertices[v]] = v;
  std::vector<std::set<int>> edges(g.vertices.size());
  for (int t = 0; t < view.T; ++t) {
    const SparseMat& w = effective[t];
    for (int i : g.vertices) {
      if (view.Observed(i, t) || !history.Online(i, t)) continue;
      for (SparseMat::InnerIterator it(w, i); it; ++it) {
        const int j = static_cast<int>(it.row());
        if (j == i || !(it.value() > 0.0) || pos[j] < 0) continue;
        edges[pos[i]].insert(pos[j]);
      }
    }
  }
  g.adjacency.resize(g.vertices.size());
  for (size_t v = 0; v < edges.size(); ++v) {
    g.adjacency[v].assign(edges[v].begin(), edges[v].end());
  }
  return g;
}

HiddenGraph BuildHiddenGraph(const CommSchedule& schedule,
                             const OnlineHistory& history,
                             const AdversaryView& view) {
  return BuildHiddenGraph(EffectiveWeights(schedule, history), history, view);
}

bool IsStronglyConnected(const HiddenGraph& graph) {
  const size_t n = graph.adjacency.size();
  if (n == 0) return false;
  if (n == 1) return true;
  std::vector<std::vector<int>> reverse(n);
  for (size_t v = 0; v < n; ++v) {
    for (int u : graph.adjacency[v]) reverse[u].push_back(static_cast<int>(v));
  }
  auto all = [](const std::vector<int>& seen) {
    return std::all_of(seen.begin(), seen.end(), [](int s) { return s != 0; });
  };
  return all(Search(graph.adjacency)) && all(Search(reverse));
}

Hypercube HypercubeGossip(int n) {
  if (n < 2 || !std::has_single_bit(static_cast<unsigned>(n))) {
    throw ConfigError("hypercube needs n a power of two, n >= 2");
  }
  Hypercube h;
  h.degree = std::countr_zero(static_cast<unsigned>(n));
  const double weight = 1.0 / (h.degree + 1);
  std::vector<Eigen::Triplet<double>> trips;
  for (int i = 0; i < n; ++i) {
    trips.emplace_back(i, i, weight);
    for (int b = 0; b < h.degree; ++b) trips.emplace_back(i ^ (1 << b), i, weight);
  }
  h.w.resize(n, n);
  h.w.setFromTriplets(trips.begin(), trips.end());
  h.lambda2 = static_cast<double>(h.degree - 1) / (h.degree + 1);
  return h;
}

uint64_t ScheduleDigest(const CommSchedule& schedule) {
  uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  feed(schedule.n);
  feed(schedule.T);
  for (const SparseMat& w : schedule.w) {
    for (int j = 0; j < w.outerSize(); ++j) {
      for (SparseMat::InnerIterator it(w, j); it; ++it) {
        uint64_t bits;
        double v = it.value();
        std::memcpy(&bits, &v, sizeof bits);
        feed(static_cast<uint64_t>(it.row()));
        feed(static_cast<uint64_t>(j));
        feed(bits);
      }
    }
  }
  return h;
}

}  // namespace inca
