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

#ifndef INCA_TYPES_H_
#define INCA_TYPES_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace inca {

using SparseMat = Eigen::SparseMatrix<double, Eigen::ColMajor>;

// Bad parameters or inconsistent inputs. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A theorem precondition (edge-vector rank) does not hold. Exit code 3.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical trouble: singular covariance, inconsistent least squares.
// Exit code 4.
class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// floor(frac * n) with a guard against 0.1 * 200 = 19.999...
int CountOf(double frac, int n);

// Attempted exchanges W_1..W_T. w[t-1] is W_t; entry (j, i) is the weight
// party j applies to the message received from i, so columns sum to one.
struct CommSchedule {
  int n = 0;
  int T = 0;
  std::vector<SparseMat> w;
  bool is_static = false;

  const SparseMat& At(int t) const { return w.at(t - 1); }
};

// Largest |1 - column sum| over all iterations.
double ColumnStochasticError(const std::vector<SparseMat>& w);

// online[t][i] != 0 iff party i is in U_t, for t in [0, T].
struct OnlineHistory {
  int n = 0;
  int T = 0;
  std::vector<std::vector<char>> online;

  static OnlineHistory AllOnline(int n, int T);

  bool Online(int i, int t) const { return online[t][i] != 0; }
  // Online flags of one party over [0, T].
  std::vector<char> PartyFlags(int i) const;
  bool Survives(int i) const { return Online(i, T); }
  int SurvivorCount() const;
  void Validate() const;
};

enum class ViewMode { kEavesdrop, kCollusion };

// Observed (party, iteration) pairs plus the corrupted set.
struct AdversaryView {
  ViewMode mode = ViewMode::kEavesdrop;
  int n = 0;
  int T = 0;
  std::vector<std::vector<char>> observed;  // [t][i]
  std::vector<char> corrupted;              // [i]

  bool Observed(int i, int t) const { return observed[t][i] != 0; }
  bool Corrupted(int i) const { return corrupted[i] != 0; }
  void Observe(int i, int t) { observed[t][i] = 1; }
  std::vector<int> Honest() const;
  int ObservedCount() const;
};

}  // namespace inca

#endif  // INCA_TYPES_H_
