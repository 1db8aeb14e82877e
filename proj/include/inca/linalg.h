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

#ifndef INCA_LINALG_H_
#define INCA_LINALG_H_

#include <vector>

#include <Eigen/Dense>

namespace inca {

// Singular values of `a`, largest first. Tall inputs go through a
// Householder QR first so the SVD only sees the small triangular factor.
Eigen::VectorXd SingularValues(const Eigen::MatrixXd& a);

// Number of singular values above rel_tol * largest.
int NumericalRank(const Eigen::MatrixXd& a, double rel_tol);

// ||a x - b|| minimized over x, infinity norm of the residual.
double LeastSquaresResidual(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

// Minimum-norm solutions of N d = r for many right-hand sides.
class MinNormSolver {
 public:
  enum class Method {
    // Gram matrix N N^T with a semidefinite pivoted Cholesky and one step of
    // iterative refinement. Fast, squares the condition number.
    kNormalEquations,
    // Complete orthogonal decomposition of N. Slow, backward stable.
    kOrthogonal,
  };

  MinNormSolver(const Eigen::MatrixXd& n_mat, Method method);

  // Solves for every column of `r`. Fills squared norms of the solutions and
  // infinity-norm residuals of N d - r.
  void Solve(const Eigen::MatrixXd& r, Eigen::VectorXd* norm_sq,
             Eigen::VectorXd* residual) const;

  // Full solutions, one column per right-hand side.
  Eigen::MatrixXd Solutions(const Eigen::MatrixXd& r) const;

  int rank() const { return rank_; }

 private:
  Eigen::MatrixXd SolveGram(const Eigen::MatrixXd& r) const;

  Method method_;
  const Eigen::MatrixXd* n_mat_;
  Eigen::MatrixXd gram_;
  // Pivoted Cholesky of the Gram matrix: P^T G P ~ F F^T, F lower, rank_
  // leading columns.
  Eigen::MatrixXd factor_;
  std::vector<int> perm_;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod_;
  int rank_ = 0;
};

// Rank of a growing set of vectors. Each vector is orthogonalized twice
// against the current basis and accepted when the remainder keeps more than
// rel_tol of its norm.
class IncrementalRank {
 public:
  IncrementalRank(int dim, double rel_tol);

  // True when `v` increases the rank.
  bool Add(const Eigen::VectorXd& v);
  int rank() const { return rank_; }

 private:
  Eigen::MatrixXd basis_;
  double rel_tol_;
  int rank_ = 0;
};

// Semidefinite Cholesky with diagonal pivoting. Stops once the largest
// remaining pivot drops below rel_tol times the largest diagonal entry.
// Returns the rank; `factor` is lower trapezoidal in pivoted order.
int PivotedCholesky(const Eigen::MatrixXd& g, double rel_tol,
                    Eigen::MatrixXd* factor, std::vector<int>* perm);

}  // namespace inca

#endif  // INCA_LINALG_H_
