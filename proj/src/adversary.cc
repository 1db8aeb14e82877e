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

#include "inca/adversary.h"

#include <algorithm>
#include <cmath>

#include "inca/rng.h"
#include "inca/topology.h"

namespace inca {
namespace {

AdversaryView EmptyView(ViewMode mode, int n, int T) {
  AdversaryView v;
  v.mode = mode;
  v.n = n;
  v.T = T;
  v.observed.assign(T + 1, std::vector<char>(n, 0));
  v.corrupted.assign(n, 0);
  for (int i = 0; i < n; ++i) v.Observe(i, T);
  return v;
}

using RowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Message coefficients over all unknowns. Columns [0, n) are x + eta and
// column n + (k - 1) * n + i is eta_{i,k}, so noise terms that have not been
// injected yet form a zero tail. Calls visit(t, m, width) with row i of m
// holding y_i^(t) and every column at or past `width` equal to zero.
template <typename Visit>
void UnrollMessages(const std::vector<SparseMat>& effective,
                    const OnlineHistory& history, const NoiseSplit& split,
                    Visit visit) {
  const int n = history.n;
  const int T = history.T;
  std::vector<AdaptedSplit> adapted;
  adapted.reserve(n);
  for (int i = 0; i < n; ++i) {
    adapted.push_back(AdaptSplit(split, history.PartyFlags(i)));
  }
  // Largest noise index touched by row t of any adapted split.
  std::vector<int> reach(T + 1, 0);
  for (int t = 0; t <= T; ++t) {
    for (const AdaptedSplit& a : adapted) {
      for (int k = T; k > reach[t]; --k) {
        if (a.z(t, k - 1) != 0.0) {
          reach[t] = k;
          break;
        }
      }
    }
  }
  int width = n;
  auto inject = [&](int t, RowMajor* m) {
    width = std::max(width, n + reach[t] * n);
    for (int i = 0; i < n; ++i) {
      (*m)(i, i) += adapted[i].c(t);
      for (int k = 0; k < reach[t]; ++k) {
        (*m)(i, n + k * n + i) += adapted[i].z(t, k);
      }
    }
  };
  RowMajor m = RowMajor::Zero(n, n + n * T);
  RowMajor next = RowMajor::Zero(n, n + n * T);
  inject(0, &m);
  visit(0, m, width);
  for (int t = 1; t <= T; ++t) {
    // Row i of W m is sum_j W(i, j) m.row(j); W is stored by columns.
    next.leftCols(width).setZero();
    const SparseMat& w = effective[t - 1];
    for (int j = 0; j < w.outerSize(); ++j) {
      for (SparseMat::InnerIterator it(w, j); it; ++it) {
        next.row(it.row()).head(width) += it.value() * m.row(j).head(width);
      }
    }
    m.swap(next);
    inject(t, &m);
    visit(t, m, width);
  }
}

// Index of the last iteration <= t at which party i was online.
int LastOnline(const OnlineHistory& history, int i, int t) {
  while (t > 0 && !history.Online(i, t)) --t;
  return t;
}

}  // namespace

AdversaryView BuildEavesdropView(int n, int T, double fraction,
                                 uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw ConfigError("observe fraction must be in [0, 1]");
  }
  AdversaryView v = EmptyView(ViewMode::kEavesdrop, n, T);
  const int count = CountOf(fraction, n);
  for (int t = 0; t < T; ++t) {
    SplitMix64 rng(DeriveSeed(seed, Stream::kView,
                              {static_cast<uint64_t>(t)}));
    for (int i : SampleWithoutReplacement(n, count, rng)) v.Observe(i, t);
  }
  return v;
}

std::vector<char> SampleCorrupted(int n, double rho, uint64_t seed) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigError("rho must be in [0, 1]");
  std::vector<char> corrupted(n, 0);
  SplitMix64 rng(DeriveSeed(seed, Stream::kCorrupt));
  for (int i : SampleWithoutReplacement(n, CountOf(rho, n), rng)) {
    corrupted[i] = 1;
  }
  return corrupted;
}

AdversaryView BuildCollusionView(const std::vector<SparseMat>& effective,
                                 const OnlineHistory& history,
                                 const std::vector<char>& corrupted) {
  const int n = history.n;
  const int T = history.T;
  if (static_cast<int>(corrupted.size()) != n ||
      static_cast<int>(effective.size()) != T) {
    throw ConfigError("collusion view: dimension mismatch");
  }
  AdversaryView v = EmptyView(ViewMode::kCollusion, n, T);
  v.corrupted = corrupted;
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < n; ++i) {
      bool seen = corrupted[i] != 0;
      for (SparseMat::InnerIterator it(effective[t], i); it && !seen; ++it) {
        seen = it.row() != i && it.value() > 0.0 && corrupted[it.row()];
      }
      if (seen) v.Observe(i, t);
    }
  }
  return v;
}

AdversaryView BuildCollusionView(const CommSchedule& schedule,
                                 const OnlineHistory& history,
                                 const std::vector<char>& corrupted) {
  return BuildCollusionView(EffectiveWeights(schedule, history), history,
                            corrupted);
}

Eigen::MatrixXd AdversarySystem::Stacked() const {
  Eigen::MatrixXd a(l.rows(), l.cols() + n.cols());
  a << l, n;
  return a;
}

AdversarySystem BuildLinearSystem(const std::vector<SparseMat>& effective,
                                  const OnlineHistory& history,
                                  const NoiseSplit& split,
                                  const AdversaryView& view,
                                  const Transcript* transcript,
                                  const SystemOptions& options) {
  const int n = history.n;
  const int T = history.T;
  if (split.T() != T || view.n != n || view.T != T ||
      static_cast<int>(effective.size()) != T) {
    throw ConfigError("linear system: dimension mismatch");
  }
  if (transcript && (transcript->n != n || transcript->T != T)) {
    throw ConfigError("linear system: transcript does not match");
  }
  AdversarySystem sys;
  sys.T = T;
  sys.honest = view.Honest();
  const int nh = sys.HonestCount();
  if (nh == 0) throw ConfigError("no honest parties");

  // Candidate rows, iteration-major and party-minor.
  std::vector<std::pair<int, int>> rows;
  std::vector<std::vector<char>> seen_state(
      n, std::vector<char>(T + 1, 0));
  for (int t = 0; t <= T; ++t) {
    for (int i = 0; i < n; ++i) {
      if (!view.Observed(i, t)) continue;
      if (options.reduction != RowReduction::kNone) {
        if (view.Corrupted(i)) continue;
        const int s = LastOnline(history, i, t);
        if (seen_state[i][s]) continue;
        seen_state[i][s] = 1;
      }
      rows.emplace_back(i, t);
    }
  }

  // Coefficient rows of every candidate, in candidate order.
  std::vector<int> first_row(T + 2, 0);
  for (const auto& [i, t] : rows) ++first_row[t + 1];
  for (int t = 0; t <= T; ++t) first_row[t + 1] += first_row[t];
  RowMajor coeff = RowMajor::Zero(rows.size(), n + n * T);
  UnrollMessages(effective, history, split,
                 [&](int t, const RowMajor& m, int width) {
                   for (int r = first_row[t]; r < first_row[t + 1]; ++r) {
                     coeff.row(r).head(width) = m.row(rows[r].first).head(width);
                   }
                 });
  std::vector<int> coeff_index;

  auto fill = [&](const std::vector<int>& keep) {
    const int m = static_cast<int>(keep.size());
    coeff_index = keep;
    sys.rows.clear();
    sys.l.resize(m, nh);
    sys.n.resize(m, static_cast<Eigen::Index>(nh) * T);
    for (int r = 0; r < m; ++r) {
      sys.rows.push_back(rows[keep[r]]);
      const auto row = coeff.row(keep[r]);
      for (int h = 0; h < nh; ++h) {
        const int p = sys.honest[h];
        sys.l(r, h) = row(p);
        for (int k = 0; k < T; ++k) sys.n(r, h * T + k) = row(n + k * n + p);
      }
    }
  };
  std::vector<int> all(rows.size());
  for (size_t r = 0; r < rows.size(); ++r) all[r] = static_cast<int>(r);
  fill(all);

  if (options.reduction != RowReduction::kNone) {
    std::vector<int> nonzero;
    for (int r = 0; r < sys.m(); ++r) {
      if (sys.l.row(r).cwiseAbs().maxCoeff() > 0.0 ||
          sys.n.row(r).cwiseAbs().maxCoeff() > 0.0) {
        nonzero.push_back(coeff_index[r]);
      }
    }
    if (nonzero.size() != coeff_index.size()) fill(nonzero);
  }

  if (options.reduction == RowReduction::kQr && sys.m() > 0) {
    Eigen::MatrixXd at = sys.Stacked().transpose();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(at);
    const Eigen::MatrixXd& r = qr.matrixQR();
    const int diag = static_cast<int>(std::min(r.rows(), r.cols()));
    const double top = diag > 0 ? std::abs(r(0, 0)) : 0.0;
    int rank = 0;
    while (rank < diag && std::abs(r(rank, rank)) > options.qr_tolerance * top) {
      ++rank;
    }
    std::vector<int> picked;
    for (int q = 0; q < rank; ++q) {
      picked.push_back(qr.colsPermutation().indices()(q));
    }
    std::sort(picked.begin(), picked.end());
    if (rank < sys.m()) {
      std::vector<int> keep;
      for (int q : picked) keep.push_back(coeff_index[q]);
      fill(keep);
    }
  }

  if (transcript) {
    Eigen::VectorXd known(n + n * T);
    known.head(n) = transcript->inputs_noisy;
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < T; ++k) known(n + k * n + i) = transcript->cancel_noise(i, k);
    }
    std::vector<int> corrupt_cols;
    for (int i = 0; i < n; ++i) {
      if (!view.Corrupted(i)) continue;
      corrupt_cols.push_back(i);
      for (int k = 0; k < T; ++k) corrupt_cols.push_back(n + k * n + i);
    }
    sys.y.resize(sys.m());
    for (int r = 0; r < sys.m(); ++r) {
      const auto [i, t] = sys.rows[r];
      double v = transcript->messages(t, i);
      for (int c : corrupt_cols) v -= coeff(coeff_index[r], c) * known(c);
      sys.y(r) = v;
    }
  }
  return sys;
}

AdversarySystem BuildLinearSystem(const CommSchedule& schedule,
                                  const OnlineHistory& history,
                                  const NoiseSplit& split,
                                  const AdversaryView& view,
                                  const Transcript* transcript,
                                  const SystemOptions& options) {
  return BuildLinearSystem(EffectiveWeights(schedule, history), history, split,
                           view, transcript, options);
}

Eigen::VectorXd HiddenValues(const AdversarySystem& system,
                             const Transcript& transcript) {
  const int nh = system.HonestCount();
  const int T = system.T;
  Eigen::VectorXd u(nh + nh * T);
  for (int h = 0; h < nh; ++h) {
    const int p = system.honest[h];
    u(h) = transcript.inputs_noisy(p);
    u.segment(nh + h * T, T) = transcript.cancel_noise.row(p).transpose();
  }
  return u;
}

double ReconstructCheck(const AdversarySystem& system,
                        const Transcript& transcript) {
  if (system.y.size() != system.m()) {
    throw ConfigError("system was built without a transcript");
  }
  if (system.m() == 0) return 0.0;
  Eigen::VectorXd u = HiddenValues(system, transcript);
  const int nh = system.HonestCount();
  Eigen::VectorXd r = system.l * u.head(nh) +
                      system.n * u.tail(u.size() - nh) - system.y;
  return r.cwiseAbs().maxCoeff();
}

Eigen::VectorXd RecoverInputs(const AdversarySystem& system) {
  const int nh = system.HonestCount();
  const int cols = nh + nh * system.T;
  if (system.m() != cols) {
    throw ConditioningError("system is not square");
  }
  if (system.y.size() != system.m()) {
    throw ConfigError("system was built without a transcript");
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(system.Stacked());
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) throw ConditioningError("system is singular");
  return lu.solve(system.y).head(nh);
}

}  // namespace inca
