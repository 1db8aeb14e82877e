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

#include "inca/accountant.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace inca {

double GaussianFactor(double delta) { return 2.0 * std::log(1.25 / delta); }

PrivacyBudget PrivacyBudget::Make(double epsilon, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must be in (0, 1)");
  return Make(epsilon, delta, GaussianFactor(delta) * (1.0 + 1e-9));
}

PrivacyBudget PrivacyBudget::Make(double epsilon, double delta, double c_sq) {
  PrivacyBudget b;
  b.epsilon = epsilon;
  b.delta = delta;
  b.c_sq = c_sq;
  b.Validate();
  return b;
}

void PrivacyBudget::Validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ConfigError("epsilon must be in (0, 1)");
  }
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must be in (0, 1)");
  if (!(c_sq > GaussianFactor(delta))) {
    throw ConfigError("c^2 must exceed 2 ln(1.25 / delta)");
  }
}

EdgeVectorSet EdgeVectors(const std::vector<SparseMat>& effective,
                          const OnlineHistory& history,
                          const AdversaryView& view,
                          const Eigen::VectorXd& w) {
  const int n = history.n;
  if (view.n != n || w.size() != n ||
      static_cast<int>(effective.size()) != history.T) {
    throw ConfigError("edge vectors: dimension mismatch");
  }
  EdgeVectorSet set;
  set.n = n;
  for (int t = 0; t < history.T; ++t) {
    for (int i = 0; i < n; ++i) {
      if (view.Corrupted(i) || view.Observed(i, t) || !history.Online(i, t)) {
        continue;
      }
      EdgeVector e;
      e.party = i;
      e.iteration = t;
      double diag = 0.0;
      for (SparseMat::InnerIterator it(effective[t], i); it; ++it) {
        if (it.row() == i) {
          diag = it.value();
        } else if (it.value() > 0.0) {
          e.receivers.push_back(static_cast<int>(it.row()));
        }
      }
      bool zero_weight = w(i) == 0.0;
      for (int j : e.receivers) zero_weight |= w(j) == 0.0;
      if (zero_weight) {
        set.excluded.emplace_back(i, t);
        continue;
      }
      e.zeta = Eigen::VectorXd::Zero(n);
      e.zeta(i) = (diag - 1.0) / w(i);
      for (SparseMat::InnerIterator it(effective[t], i); it; ++it) {
        if (it.row() != i && it.value() > 0.0) {
          e.zeta(it.row()) = it.value() / w(it.row());
        }
      }
      set.vectors.push_back(std::move(e));
    }
  }
  return set;
}

EdgeVectorSet RestrictToCoalition(const EdgeVectorSet& edges,
                                  const std::vector<char>& in_coalition) {
  EdgeVectorSet out;
  out.n = edges.n;
  out.excluded = edges.excluded;
  for (const EdgeVector& e : edges.vectors) {
    if (!in_coalition[e.party]) continue;
    const bool inside =
        std::all_of(e.receivers.begin(), e.receivers.end(),
                    [&](int j) { return in_coalition[j] != 0; });
    if (inside) out.vectors.push_back(e);
  }
  return out;
}

int RankCount(const EdgeVectorSet& edges, double tol) {
  if (edges.vectors.empty()) return 0;
  Eigen::MatrixXd stacked(edges.vectors.size(), edges.n);
  for (size_t r = 0; r < edges.vectors.size(); ++r) {
    stacked.row(r) = edges.vectors[r].zeta.transpose();
  }
  return NumericalRank(stacked, tol);
}

double NullspaceResidual(const AdversarySystem& system,
                         const Eigen::VectorXd& zeta, double beta) {
  Eigen::VectorXd lifted(system.HonestCount());
  for (int h = 0; h < system.HonestCount(); ++h) {
    lifted(h) = beta * zeta(system.honest[h]);
  }
  Eigen::VectorXd rhs = -(system.l * lifted);
  return LeastSquaresResidual(system.n, rhs);
}

std::string TheoremName(Theorem theorem) {
  switch (theorem) {
    case Theorem::kNoDrop:
      return "nodrop";
    case Theorem::kTotalSum:
      return "totalsum";
    case Theorem::kCoalition:
      return "coalition";
  }
  return "nodrop";
}

Theorem ParseTheorem(const std::string& name) {
  if (name == "nodrop") return Theorem::kNoDrop;
  if (name == "totalsum") return Theorem::kTotalSum;
  if (name == "coalition") return Theorem::kCoalition;
  throw ConfigError("unknown theorem: " + name);
}

std::string StatusName(CalibrationStatus status) {
  switch (status) {
    case CalibrationStatus::kOk:
      return "ok";
    case CalibrationStatus::kRankPrecondition:
      return "rank_precondition";
    case CalibrationStatus::kBelowBound:
      return "below_bound";
    case CalibrationStatus::kNonPositiveMargin:
      return "non_positive_margin";
    case CalibrationStatus::kInconsistent:
      return "inconsistent";
  }
  return "ok";
}

CalibrationResult Calibrate(const PrivacyBudget& budget,
                            const AdversarySystem& system,
                            const EdgeVectorSet& edges,
                            const Eigen::VectorXd& w,
                            const OnlineHistory& history,
                            const CalibrationOptions& options) {
  budget.Validate();
  const int n = history.n;
  const int nh = system.HonestCount();
  if (w.size() != n || edges.n != n) {
    throw ConfigError("calibrate: dimension mismatch");
  }
  CalibrationResult res;
  res.theorem = options.theorem;

  std::vector<char> in_j(n, 0);
  for (int p : system.honest) {
    in_j[p] = options.theorem != Theorem::kCoalition || history.Survives(p);
  }
  std::vector<int> j_members;
  for (int p : system.honest) {
    if (in_j[p]) j_members.push_back(p);
  }
  res.coalition_size = static_cast<int>(j_members.size());
  res.required_rank = std::max(0, res.coalition_size - 1);
  res.rank = options.theorem == Theorem::kCoalition
                 ? RankCount(RestrictToCoalition(edges, in_j), options.rank_tol)
                 : RankCount(edges, options.rank_tol);
  for (int p : system.honest) res.w_u += w(p);

  const double eps_sq = budget.epsilon * budget.epsilon;
  const double inf = std::numeric_limits<double>::infinity();
  switch (options.theorem) {
    case Theorem::kNoDrop:
      res.sigma_ind_sq_bound = budget.c_sq / (nh * eps_sq);
      break;
    case Theorem::kTotalSum:
    case Theorem::kCoalition: {
      const double count = options.theorem == Theorem::kTotalSum
                               ? nh - 1.0
                               : res.coalition_size - 1.0;
      const double gap = res.w_u - 1.0;
      res.sigma_ind_sq_bound =
          gap > 0.0 ? count * budget.c_sq / (gap * gap * eps_sq) : inf;
      break;
    }
  }
  res.sigma_ind_sq = options.sigma_ind_sq > 0.0
                         ? options.sigma_ind_sq
                         : options.alpha * res.sigma_ind_sq_bound;

  if (res.rank < res.required_rank || j_members.empty()) {
    res.status = CalibrationStatus::kRankPrecondition;
    return res;
  }
  if (!(res.sigma_ind_sq > res.sigma_ind_sq_bound) ||
      !std::isfinite(res.sigma_ind_sq)) {
    res.status = CalibrationStatus::kBelowBound;
    return res;
  }

  // Delta^eta per honest target, one column each.
  double wj_sq = 0.0;
  for (int p : j_members) wj_sq += w(p) * w(p);
  Eigen::MatrixXd shift = Eigen::MatrixXd::Identity(nh, nh);
  Eigen::VectorXd eta_norm_sq(nh);
  for (int h = 0; h < nh; ++h) {
    const double wi = w(system.honest[h]);
    if (in_j[system.honest[h]]) {
      for (int g = 0; g < nh; ++g) {
        const int p = system.honest[g];
        if (in_j[p]) shift(g, h) -= wi / wj_sq * w(p);
      }
      eta_norm_sq(h) = wi * wi / wj_sq;
    } else {
      const double d = wi * wi / wj_sq;
      shift(h, h) += d;
      eta_norm_sq(h) = d * d;
    }
  }
  Eigen::MatrixXd rhs = -(system.l * shift);

  const auto method =
      static_cast<long>(system.n.size()) > options.orthogonal_limit
          ? MinNormSolver::Method::kNormalEquations
          : MinNormSolver::Method::kOrthogonal;
  MinNormSolver solver(system.n, method);
  Eigen::VectorXd strip_norm_sq;
  Eigen::VectorXd residual;
  solver.Solve(rhs, &strip_norm_sq, &residual);
  res.max_residual = residual.size() ? residual.maxCoeff() : 0.0;
  if (!(res.max_residual <= options.residual_tol)) {
    res.status = CalibrationStatus::kInconsistent;
    return res;
  }

  const double cap = budget.Cap();
  res.sigma_delta_sq = -1.0;
  for (int h = 0; h < nh; ++h) {
    const double margin = cap - eta_norm_sq(h) / res.sigma_ind_sq;
    if (!(margin > 0.0)) {
      res.status = CalibrationStatus::kNonPositiveMargin;
      res.binding_party = system.honest[h];
      res.delta_eta_norm_sq = eta_norm_sq(h);
      res.delta_strip_norm_sq = strip_norm_sq(h);
      return res;
    }
    const double need = strip_norm_sq(h) / margin;
    if (need > res.sigma_delta_sq) {
      res.sigma_delta_sq = need;
      res.binding_party = system.honest[h];
      res.delta_eta_norm_sq = eta_norm_sq(h);
      res.delta_strip_norm_sq = strip_norm_sq(h);
    }
  }
  res.ok = true;
  res.status = CalibrationStatus::kOk;
  return res;
}

double NoiseDifferenceQuantity(const CalibrationResult& result) {
  double q = result.delta_eta_norm_sq / result.sigma_ind_sq;
  if (result.sigma_delta_sq > 0.0) {
    q += result.delta_strip_norm_sq / result.sigma_delta_sq;
  }
  return q;
}

bool AbstractDpCheck(const PrivacyBudget& budget, const AdversarySystem& system,
                     double sigma_ind_sq, double sigma_delta_sq,
                     double* worst) {
  Eigen::MatrixXd sigma = sigma_ind_sq * system.l * system.l.transpose();
  if (system.n.cols() > 0) {
    sigma.noalias() += sigma_delta_sq * system.n * system.n.transpose();
  }
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-15)) {
    throw ConditioningError("covariance of the observed messages is singular");
  }
  Eigen::MatrixXd z = llt.solve(system.l);
  double top = 0.0;
  for (Eigen::Index h = 0; h < system.l.cols(); ++h) {
    top = std::max(top, system.l.col(h).dot(z.col(h)));
  }
  if (worst) *worst = top;
  return top <= budget.Cap() * (1.0 + 1e-9);
}

double BlockMinEigenvalue(const Eigen::MatrixXd& sigma,
                          const Eigen::VectorXd& h, double cap) {
  const Eigen::Index m = sigma.rows();
  Eigen::MatrixXd block(m + 1, m + 1);
  block.topLeftCorner(m, m) = sigma;
  block.topRightCorner(m, 1) = h;
  block.bottomLeftCorner(1, m) = h.transpose();
  block(m, m) = cap;
  Eigen::VectorXd scale(m + 1);
  for (Eigen::Index k = 0; k <= m; ++k) {
    const double d = block(k, k);
    if (d > 0.0) {
      scale(k) = 1.0 / std::sqrt(d);
    } else if (block.row(k).cwiseAbs().maxCoeff() > 0.0 || d < 0.0) {
      return -std::numeric_limits<double>::infinity();
    } else {
      scale(k) = 1.0;
    }
  }
  block = scale.asDiagonal() * block * scale.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(block,
                                                     Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

bool SdpFeasibilityCheck(const PrivacyBudget& budget,
                         const AdversarySystem& system,
                         const Eigen::VectorXd& sigma_e) {
  Eigen::MatrixXd a = system.Stacked();
  if (sigma_e.size() != a.cols()) {
    throw ConfigError("sigma_e must have one entry per unknown");
  }
  Eigen::MatrixXd sigma = a * sigma_e.asDiagonal() * a.transpose();
  for (Eigen::Index h = 0; h < system.l.cols(); ++h) {
    if (BlockMinEigenvalue(sigma, system.l.col(h), budget.Cap()) < -1e-10) {
      return false;
    }
  }
  return true;
}

bool StaticNegativeHypothesis(const std::vector<SparseMat>& effective,
                              const AdversaryView& view) {
  for (size_t t = 1; t < effective.size(); ++t) {
    if ((effective[t] - effective[0]).norm() != 0.0) return false;
  }
  int fully_observed = 0;
  for (int i : view.Honest()) {
    bool all = true;
    for (int t = 0; t <= view.T && all; ++t) all = view.Observed(i, t);
    fully_observed += all ? 1 : 0;
  }
  return fully_observed >= 2;
}

bool SufficiencyByConnectivity(const HiddenGraph& graph,
                               const EdgeVectorSet& edges, double tol) {
  if (!IsStronglyConnected(graph)) return true;
  return RankCount(edges, tol) >= static_cast<int>(graph.vertices.size()) - 1;
}

}  // namespace inca
