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

#include "inca/linalg.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace inca {

Eigen::VectorXd SingularValues(const Eigen::MatrixXd& a) {
  if (a.rows() == 0 || a.cols() == 0) return Eigen::VectorXd();
  auto small_svd = [](const Eigen::MatrixXd& m) -> Eigen::VectorXd {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues();
  };
  auto via_qr = [&small_svd](const Eigen::MatrixXd& tall) -> Eigen::VectorXd {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(tall);
    const Eigen::Index c = tall.cols();
    Eigen::MatrixXd r =
        qr.matrixQR().topRows(c).triangularView<Eigen::Upper>();
    return small_svd(r);
  };
  if (a.rows() > 2 * a.cols()) return via_qr(a);
  if (a.cols() > 2 * a.rows()) return via_qr(a.transpose());
  return small_svd(a);
}

int NumericalRank(const Eigen::MatrixXd& a, double rel_tol) {
  Eigen::VectorXd sv = SingularValues(a);
  if (sv.size() == 0) return 0;
  const double top = sv.maxCoeff();
  if (!(top > 0.0)) return 0;
  return static_cast<int>((sv.array() > rel_tol * top).count());
}

double LeastSquaresResidual(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  if (a.cols() == 0 || a.rows() == 0) {
    return b.size() ? b.cwiseAbs().maxCoeff() : 0.0;
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  Eigen::VectorXd x = cod.solve(b);
  Eigen::VectorXd r = a * x - b;
  return r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
}

int PivotedCholesky(const Eigen::MatrixXd& g, double rel_tol,
                    Eigen::MatrixXd* factor, std::vector<int>* perm) {
  const int m = static_cast<int>(g.rows());
  Eigen::MatrixXd a = g;
  Eigen::MatrixXd& l = *factor;
  l.setZero(m, m);
  perm->resize(m);
  std::iota(perm->begin(), perm->end(), 0);
  if (m == 0) return 0;
  Eigen::VectorXd d = a.diagonal();
  const double top = d.maxCoeff();
  if (!(top > 0.0)) return 0;
  const double stop = rel_tol * top;
  int k = 0;
  for (; k < m; ++k) {
    Eigen::Index rel;
    const double piv = d.tail(m - k).maxCoeff(&rel);
    const int p = k + static_cast<int>(rel);
    if (!(piv > stop)) break;
    if (p != k) {
      std::swap((*perm)[k], (*perm)[p]);
      a.row(k).swap(a.row(p));
      a.col(k).swap(a.col(p));
      l.row(k).head(k).swap(l.row(p).head(k));
      std::swap(d(k), d(p));
    }
    const double lkk = std::sqrt(piv);
    l(k, k) = lkk;
    const int rest = m - k - 1;
    if (rest > 0) {
      Eigen::VectorXd col = a.col(k).tail(rest);
      if (k > 0) {
        col.noalias() -=
            l.block(k + 1, 0, rest, k) * l.row(k).head(k).transpose();
      }
      l.col(k).tail(rest) = col / lkk;
      d.tail(rest) -= l.col(k).tail(rest).cwiseAbs2();
    }
  }
  return k;
}

MinNormSolver::MinNormSolver(const Eigen::MatrixXd& n_mat, Method method)
    : method_(method), n_mat_(&n_mat) {
  if (method_ == Method::kOrthogonal) {
    cod_.compute(n_mat);
    rank_ = static_cast<int>(cod_.rank());
    return;
  }
  const Eigen::Index m = n_mat.rows();
  gram_.setZero(m, m);
  gram_.selfadjointView<Eigen::Lower>().rankUpdate(n_mat);
  gram_ = gram_.selfadjointView<Eigen::Lower>();
  rank_ = PivotedCholesky(gram_, 1e-13, &factor_, &perm_);
}

Eigen::MatrixXd MinNormSolver::SolveGram(const Eigen::MatrixXd& r) const {
  const Eigen::Index m = r.rows();
  Eigen::MatrixXd b(rank_, r.cols());
  for (int k = 0; k < rank_; ++k) b.row(k) = r.row(perm_[k]);
  const auto f11 = factor_.topLeftCorner(rank_, rank_);
  f11.triangularView<Eigen::Lower>().solveInPlace(b);
  f11.transpose().triangularView<Eigen::Upper>().solveInPlace(b);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(m, r.cols());
  for (int k = 0; k < rank_; ++k) x.row(perm_[k]) = b.row(k);
  return x;
}

void MinNormSolver::Solve(const Eigen::MatrixXd& r, Eigen::VectorXd* norm_sq,
                          Eigen::VectorXd* residual) const {
  const Eigen::Index cols = r.cols();
  norm_sq->resize(cols);
  residual->resize(cols);
  if (r.rows() == 0) {
    norm_sq->setZero();
    residual->setZero();
    return;
  }
  if (method_ == Method::kOrthogonal) {
    Eigen::MatrixXd d = cod_.solve(r);
    Eigen::MatrixXd res = (*n_mat_) * d - r;
    for (Eigen::Index j = 0; j < cols; ++j) {
      (*norm_sq)(j) = d.col(j).squaredNorm();
      (*residual)(j) = res.col(j).cwiseAbs().maxCoeff();
    }
    return;
  }
  Eigen::MatrixXd lambda = SolveGram(r);
  Eigen::MatrixXd g_lambda = gram_ * lambda;
  // One step of iterative refinement.
  lambda += SolveGram(r - g_lambda);
  g_lambda.noalias() = gram_ * lambda;
  for (Eigen::Index j = 0; j < cols; ++j) {
    (*norm_sq)(j) = std::max(0.0, lambda.col(j).dot(g_lambda.col(j)));
    (*residual)(j) = (g_lambda.col(j) - r.col(j)).cwiseAbs().maxCoeff();
  }
}

Eigen::MatrixXd MinNormSolver::Solutions(const Eigen::MatrixXd& r) const {
  if (method_ == Method::kOrthogonal) return cod_.solve(r);
  Eigen::MatrixXd lambda = SolveGram(r);
  lambda += SolveGram(r - gram_ * lambda);
  return n_mat_->transpose() * lambda;
}

IncrementalRank::IncrementalRank(int dim, double rel_tol)
    : basis_(dim, 0), rel_tol_(rel_tol) {}

bool IncrementalRank::Add(const Eigen::VectorXd& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || rank_ == basis_.rows()) return false;
  Eigen::VectorXd r = v;
  if (rank_ > 0) {
    auto q = basis_.leftCols(rank_);
    for (int pass = 0; pass < 2; ++pass) {
      Eigen::VectorXd proj = q.transpose() * r;
      r.noalias() -= q * proj;
    }
  }
  const double rest = r.norm();
  if (!(rest > rel_tol_ * norm)) return false;
  if (rank_ == basis_.cols()) {
    basis_.conservativeResize(Eigen::NoChange,
                              std::min<Eigen::Index>(basis_.rows(),
                                                     2 * rank_ + 8));
  }
  basis_.col(rank_++) = r / rest;
  return true;
}

}  // namespace inca
