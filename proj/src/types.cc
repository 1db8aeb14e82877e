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

#include "inca/types.h"

#include <cmath>
#include <string>

namespace inca {

int CountOf(double frac, int n) {
  return static_cast<int>(std::floor(frac * n + 1e-9));
}

double ColumnStochasticError(const std::vector<SparseMat>& w) {
  double worst = 0.0;
  for (const SparseMat& m : w) {
    for (int j = 0; j < m.outerSize(); ++j) {
      double sum = 0.0;
      for (SparseMat::InnerIterator it(m, j); it; ++it) sum += it.value();
      worst = std::max(worst, std::abs(1.0 - sum));
    }
  }
  return worst;
}

OnlineHistory OnlineHistory::AllOnline(int n, int T) {
  OnlineHistory h;
  h.n = n;
  h.T = T;
  h.online.assign(T + 1, std::vector<char>(n, 1));
  return h;
}

std::vector<char> OnlineHistory::PartyFlags(int i) const {
  std::vector<char> flags(T + 1);
  for (int t = 0; t <= T; ++t) flags[t] = online[t][i];
  return flags;
}

int OnlineHistory::SurvivorCount() const {
  int count = 0;
  for (int i = 0; i < n; ++i) count += Survives(i) ? 1 : 0;
  return count;
}

void OnlineHistory::Validate() const {
  if (static_cast<int>(online.size()) != T + 1) {
    throw ConfigError("online history must cover iterations 0..T");
  }
  for (const auto& row : online) {
    if (static_cast<int>(row.size()) != n) {
      throw ConfigError("online history row has the wrong party count");
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!Online(i, 0)) {
      throw ConfigError("party " + std::to_string(i) + " missing from U_0");
    }
  }
}

std::vector<int> AdversaryView::Honest() const {
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    if (!Corrupted(i)) out.push_back(i);
  }
  return out;
}

int AdversaryView::ObservedCount() const {
  int count = 0;
  for (const auto& row : observed) {
    for (char c : row) count += c ? 1 : 0;
  }
  return count;
}

}  // namespace inca
