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

#include "inca/harness.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <mutex>
#include <thread>

#include "json.hpp"

#include "inca/adversary.h"
#include "inca/baselines.h"
#include "inca/linalg.h"
#include "inca/rng.h"
#include "inca/serialize.h"
#include "inca/topology.h"

namespace inca {
namespace {

using nlohmann::json;

const char* const kExperiments[] = {"accuracy_vs_collusion", "success_rate",
                                    "min_iterations", "dropout_mse"};

template <typename T>
std::vector<T> Grid(const json& value, const std::string& key) {
  try {
    if (value.is_array()) return value.get<std::vector<T>>();
    return {value.get<T>()};
  } catch (const json::exception& e) {
    throw ConfigError("bad value for '" + key + "': " + e.what());
  }
}

template <typename T>
T Scalar(const json& value, const std::string& key) {
  try {
    return value.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("bad value for '" + key + "': " + e.what());
  }
}

ResultRow BaseRow(const ExperimentConfig& c, const std::string& method, int n) {
  ResultRow r;
  r.experiment = c.experiment;
  r.method = method;
  r.n = n;
  r.epsilon = c.epsilon;
  r.delta = c.delta;
  r.alpha = c.alpha;
  r.seed = c.seed;
  return r;
}

ResultRow RowFor(const DropoutPoint& p, const ExperimentConfig& c,
                 const std::string& method, const std::string& metric,
                 double value, int trials) {
  ResultRow r = BaseRow(c, method, p.n);
  r.k = p.k;
  r.T = p.T;
  r.epsilon = p.epsilon;
  r.delta = p.delta;
  r.rho = p.rho;
  r.gamma = p.gamma;
  r.alpha = p.alpha;
  r.metric = metric;
  r.value = value;
  r.trials = trials;
  return r;
}

ViewMode ParseMode(const std::string& mode) {
  if (mode == "eavesdrop") return ViewMode::kEavesdrop;
  if (mode == "collusion") return ViewMode::kCollusion;
  throw ConfigError("mode must be eavesdrop or collusion");
}

struct TrialSetup {
  std::vector<SparseMat> effective;
  OnlineHistory history;
  AdversaryView view;
};

TrialSetup NoDropSetup(int n, int k, int T, ViewMode mode, double level,
                       bool distinct, uint64_t trial_seed) {
  TrialSetup s;
  CommSchedule schedule = RandomKOutSchedule(n, k, T, trial_seed, distinct);
  s.history = OnlineHistory::AllOnline(n, T);
  s.effective = EffectiveWeights(schedule, s.history);
  s.view = mode == ViewMode::kEavesdrop
               ? BuildEavesdropView(n, T, level, trial_seed)
               : BuildCollusionView(s.effective, s.history,
                                    SampleCorrupted(n, level, trial_seed));
  return s;
}

uint64_t PhaseSeed(uint64_t seed, uint64_t phase) {
  return DeriveSeed(seed, {phase});
}

Eigen::VectorXd UniformInputs(int n, uint64_t trial_seed) {
  SplitMix64 rng(DeriveSeed(trial_seed, Stream::kInput));
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = rng.Uniform();
  return x;
}

}  // namespace

void ExperimentConfig::Validate() const {
  if (std::find(std::begin(kExperiments), std::end(kExperiments),
                experiment) == std::end(kExperiments)) {
    throw ConfigError("unknown experiment: " + experiment);
  }
  if (n.empty() || k.empty() || T.empty() || rho.empty() || gamma.empty() ||
      gamma2.empty()) {
    throw ConfigError("parameter grids must be non-empty");
  }
  if (trials < 1 || mse_trials < 1) throw ConfigError("trials must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (t_max < 1) throw ConfigError("t_max must be >= 1");
  if (gopa_k < 1) throw ConfigError("gopa_k must be >= 1");
  for (int v : n) {
    if (v < 2) throw ConfigError("n must be >= 2");
  }
  for (int v : k) {
    if (v < 1) throw ConfigError("k must be >= 1");
  }
  for (int v : T) {
    if (v < 1) throw ConfigError("T must be >= 1");
  }
  for (double v : rho) {
    if (!(v >= 0.0 && v < 1.0)) throw ConfigError("rho must be in [0, 1)");
  }
  for (double v : gamma) {
    if (!(v >= 0.0 && v < 1.0)) throw ConfigError("gamma must be in [0, 1)");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ConfigError("epsilon must be in (0, 1)");
  }
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must be in (0, 1)");
  if (!(alpha > 1.0)) throw ConfigError("alpha must exceed 1");
  if (!(observe_fraction >= 0.0 && observe_fraction <= 1.0)) {
    throw ConfigError("observe_fraction must be in [0, 1]");
  }
  ParseMode(mode);
  if (experiment == "min_iterations" && !distinct) {
    throw ConfigError("min_iterations runs in distinct-neighbor mode");
  }
  for (const std::string& rule : gamma2) ResolveGamma2(rule, 0.1, 100);
}

ExperimentConfig ParseExperimentConfig(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  bool distinct_set = false;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& key = it.key();
    const json& v = it.value();
    if (key == "experiment") {
      c.experiment = Scalar<std::string>(v, key);
    } else if (key == "n") {
      c.n = Grid<int>(v, key);
    } else if (key == "k") {
      c.k = Grid<int>(v, key);
    } else if (key == "T") {
      c.T = Grid<int>(v, key);
    } else if (key == "rho") {
      c.rho = Grid<double>(v, key);
    } else if (key == "gamma") {
      c.gamma = Grid<double>(v, key);
    } else if (key == "gamma2") {
      c.gamma2.clear();
      for (const json& g : v.is_array() ? v : json::array({v})) {
        if (g.is_string()) {
          c.gamma2.push_back(g.get<std::string>());
        } else if (g.is_number()) {
          c.gamma2.push_back(FormatDouble(g.get<double>()));
        } else {
          throw ConfigError("gamma2 entries must be strings or numbers");
        }
      }
    } else if (key == "epsilon") {
      c.epsilon = Scalar<double>(v, key);
    } else if (key == "delta") {
      c.delta = Scalar<double>(v, key);
    } else if (key == "alpha") {
      c.alpha = Scalar<double>(v, key);
    } else if (key == "observe_fraction") {
      c.observe_fraction = Scalar<double>(v, key);
    } else if (key == "mode") {
      c.mode = Scalar<std::string>(v, key);
    } else if (key == "distinct") {
      c.distinct = Scalar<bool>(v, key);
      distinct_set = true;
    } else if (key == "muffliato") {
      c.muffliato = Scalar<bool>(v, key);
    } else if (key == "gopa_k") {
      c.gopa_k = Scalar<int>(v, key);
    } else if (key == "t_max") {
      c.t_max = Scalar<int>(v, key);
    } else if (key == "trials") {
      c.trials = Scalar<int>(v, key);
    } else if (key == "mse_trials") {
      c.mse_trials = Scalar<int>(v, key);
    } else if (key == "seed") {
      c.seed = Scalar<uint64_t>(v, key);
    } else if (key == "workers") {
      c.workers = Scalar<int>(v, key);
    } else if (key == "plot") {
      c.plot = Scalar<bool>(v, key);
    } else {
      throw ConfigError("unknown config key: " + key);
    }
  }
  if (c.experiment == "min_iterations" && !distinct_set) c.distinct = true;
  c.Validate();
  return c;
}

uint64_t TrialSeed(uint64_t seed, int index) {
  return DeriveSeed(seed, Stream::kTrial, {static_cast<uint64_t>(index)});
}

void ParallelFor(int count, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mu;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

RankTrial RankCheckTrial(int n, int k, int T, ViewMode mode, double level,
                         bool distinct, uint64_t trial_seed) {
  TrialSetup s = NoDropSetup(n, k, T, mode, level, distinct, trial_seed);
  EdgeVectorSet edges = EdgeVectors(s.effective, s.history, s.view,
                                    Eigen::VectorXd::Ones(n));
  RankTrial r;
  r.rank = RankCount(edges);
  r.required = static_cast<int>(s.view.Honest().size()) - 1;
  r.success = r.rank >= r.required;
  return r;
}

int RankProfile::FirstSuccess() const {
  for (size_t t = 0; t < rank.size(); ++t) {
    if (rank[t] >= required) return static_cast<int>(t) + 1;
  }
  return static_cast<int>(rank.size()) + 1;
}

RankProfile RankProfileTrial(int n, int k, int t_max, ViewMode mode,
                             double level, bool distinct,
                             uint64_t trial_seed) {
  TrialSetup s = NoDropSetup(n, k, t_max, mode, level, distinct, trial_seed);
  EdgeVectorSet edges = EdgeVectors(s.effective, s.history, s.view,
                                    Eigen::VectorXd::Ones(n));
  RankProfile p;
  p.required = static_cast<int>(s.view.Honest().size()) - 1;
  p.rank.assign(t_max, 0);
  IncrementalRank tracker(n, 1e-9);
  size_t next = 0;
  for (int t = 0; t < t_max; ++t) {
    // Vectors come out iteration-major, so iteration t is a contiguous run.
    for (; next < edges.vectors.size() && edges.vectors[next].iteration == t;
         ++next) {
      if (tracker.rank() >= p.required) break;
      tracker.Add(edges.vectors[next].zeta);
    }
    while (next < edges.vectors.size() && edges.vectors[next].iteration == t) {
      ++next;
    }
    p.rank[t] = tracker.rank();
  }
  return p;
}

double SuccessRate(int n, int k, int T, ViewMode mode, double level,
                   bool distinct, int trials, uint64_t seed, int workers) {
  std::vector<char> ok(trials, 0);
  ParallelFor(trials, workers, [&](int i) {
    ok[i] = RankCheckTrial(n, k, T, mode, level, distinct, TrialSeed(seed, i))
                .success;
  });
  return static_cast<double>(std::count(ok.begin(), ok.end(), 1)) / trials;
}

int MinIterationsForTrial(int n, int k, double rho, bool distinct, int t_max,
                          uint64_t trial_seed) {
  return RankProfileTrial(n, k, t_max, ViewMode::kCollusion, rho, distinct,
                          trial_seed)
      .FirstSuccess();
}

double DropoutSigmaInd(const DropoutPoint& p) {
  const double online = p.n * (1.0 - p.gamma - p.rho);
  if (!(online > 0.0)) throw ConfigError("gamma + rho must be below 1");
  return p.alpha * GaussianFactor(p.delta) / (online * p.epsilon * p.epsilon);
}

Phase1 IncaPhase1(const DropoutPoint& p, int runs, uint64_t seed,
                  int workers) {
  const PrivacyBudget budget = PrivacyBudget::Make(p.epsilon, p.delta);
  const double sigma_ind_sq = DropoutSigmaInd(p);
  std::vector<CalibrationResult> results(runs);
  ParallelFor(runs, workers, [&](int r) {
    const uint64_t ts = TrialSeed(seed, r);
    CommSchedule schedule = RandomKOutSchedule(p.n, p.k, p.T, ts);
    OnlineHistory history = SampleDropouts(p.n, p.T, p.gamma, ts);
    std::vector<SparseMat> eff = EffectiveWeights(schedule, history);
    AdversaryView view =
        BuildCollusionView(eff, history, SampleCorrupted(p.n, p.rho, ts));
    NoiseSplit split = MakeIncremental(p.T, 0.0);
    Eigen::VectorXd w = InjectedWeights(split, history);
    SystemOptions so;
    so.reduction = RowReduction::kStructural;
    AdversarySystem system =
        BuildLinearSystem(eff, history, split, view, nullptr, so);
    CalibrationOptions co;
    co.theorem = Theorem::kCoalition;
    co.sigma_ind_sq = sigma_ind_sq;
    results[r] = Calibrate(budget, system, EdgeVectors(eff, history, view, w),
                           w, history, co);
  });
  Phase1 out;
  out.runs = runs;
  for (const CalibrationResult& r : results) {
    out.max_residual = std::max(out.max_residual, r.max_residual);
    if (!r.ok) {
      ++out.failures;
      continue;
    }
    out.worst = std::max(out.worst, r.sigma_delta_sq);
  }
  return out;
}

double IncaPhase2(const DropoutPoint& p, double sigma_delta_sq, int runs,
                  uint64_t seed, int workers) {
  std::vector<double> se(runs, 0.0);
  ParallelFor(runs, workers, [&](int r) {
    const uint64_t ts = TrialSeed(seed, r);
    CommSchedule schedule = RandomKOutSchedule(p.n, p.k, p.T, ts);
    OnlineHistory history = SampleDropouts(p.n, p.T, p.gamma, ts);
    ProtocolConfig config;
    config.n = p.n;
    config.T = p.T;
    config.sigma_ind_sq = DropoutSigmaInd(p);
    config.split = MakeIncremental(p.T, sigma_delta_sq);
    config.seed = ts;
    Eigen::VectorXd x = UniformInputs(p.n, ts);
    Transcript tr = RunInca(config, schedule, history, x);
    const double err = Disseminate(tr, history) - x.mean();
    se[r] = err * err;
  });
  double sum = 0.0;
  for (double v : se) sum += v;
  return sum / runs;
}

Phase1 GopaPhase1(const DropoutPoint& p, int gopa_k, int runs, uint64_t seed,
                  int workers) {
  const PrivacyBudget budget = PrivacyBudget::Make(p.epsilon, p.delta);
  const double sigma_ind_sq = DropoutSigmaInd(p);
  std::vector<double> var(runs, 0.0);
  ParallelFor(runs, workers, [&](int r) {
    const uint64_t ts = TrialSeed(seed, r);
    var[r] = PairwiseVariance(RandomPairGraph(p.n, gopa_k, ts),
                              SampleCorrupted(p.n, p.rho, ts), budget,
                              sigma_ind_sq);
  });
  Phase1 out;
  out.runs = runs;
  for (double v : var) {
    if (!std::isfinite(v)) {
      ++out.failures;
      continue;
    }
    out.worst = std::max(out.worst, v);
  }
  return out;
}

double GopaPhase2(const DropoutPoint& p, int gopa_k, double gamma2,
                  double sigma_pair_sq, int runs, uint64_t seed,
                  int workers) {
  const double sigma_ind_sq = DropoutSigmaInd(p);
  std::vector<double> se(runs, 0.0);
  ParallelFor(runs, workers, [&](int r) {
    const uint64_t ts = TrialSeed(seed, r);
    se[r] = GopaSimulate(RandomPairGraph(p.n, gopa_k, ts),
                         UniformInputs(p.n, ts), p.gamma, gamma2,
                         sigma_pair_sq, sigma_ind_sq, ts)
                .squared_error;
  });
  double sum = 0.0;
  for (double v : se) sum += v;
  return sum / runs;
}

double ResolveGamma2(const std::string& rule, double gamma, int n) {
  double v;
  if (rule == "gamma/2") {
    v = gamma / 2.0;
  } else if (rule == "gamma/4") {
    v = gamma / 4.0;
  } else if (rule == "1/n") {
    v = 1.0 / n;
  } else {
    size_t used = 0;
    try {
      v = std::stod(rule, &used);
    } catch (const std::exception&) {
      throw ConfigError("bad gamma2 rule: " + rule);
    }
    if (used != rule.size() || !(v >= 0.0)) {
      throw ConfigError("bad gamma2 rule: " + rule);
    }
  }
  // Rollback dropouts are a subset of all dropouts.
  return std::min(v, gamma);
}

std::vector<ResultRow> RunAccuracyVsCollusion(const ExperimentConfig& c) {
  std::vector<ResultRow> rows;
  const double c_sq = GaussianFactor(c.delta);
  for (int n : c.n) {
    std::vector<ResultRow> fixed;
    ResultRow central = BaseRow(c, "central", n);
    central.metric = "mse";
    central.value = CentralDpMse(n, c.epsilon, c.delta);
    ResultRow local = BaseRow(c, "local", n);
    local.metric = "mse";
    local.value = LocalDpMse(n, c.epsilon, c.delta);
    for (double rho : c.rho) {
      const int nh = n - CountOf(rho, n);
      if (nh < 1) throw ConfigError("no honest parties left");
      ResultRow r = BaseRow(c, "inca", n);
      r.rho = rho;
      r.metric = "mse";
      r.value = c_sq / (static_cast<double>(nh) * n * c.epsilon * c.epsilon);
      rows.push_back(r);
      central.rho = local.rho = rho;
      rows.push_back(central);
      rows.push_back(local);
      if (c.muffliato) {
        MuffliatoResult m = MuffliatoMse(n, c.epsilon, c.delta);
        ResultRow mr = BaseRow(c, "muffliato_appendix_bound", n);
        mr.rho = rho;
        mr.k = m.degree;
        mr.T = m.iterations;
        mr.metric = "mse";
        mr.value = m.mse;
        rows.push_back(mr);
      }
    }
  }
  return rows;
}

std::vector<ResultRow> RunSuccessRate(const ExperimentConfig& c) {
  const ViewMode mode = ParseMode(c.mode);
  const std::vector<double> levels =
      mode == ViewMode::kEavesdrop ? std::vector<double>{c.observe_fraction}
                                   : c.rho;
  const int t_max = *std::max_element(c.T.begin(), c.T.end());
  std::vector<ResultRow> rows;
  for (int n : c.n) {
    for (int k : c.k) {
      for (double level : levels) {
        std::vector<RankProfile> prof(c.trials);
        ParallelFor(c.trials, c.workers, [&](int i) {
          prof[i] = RankProfileTrial(n, k, t_max, mode, level, c.distinct,
                                     TrialSeed(c.seed, i));
        });
        for (int T : c.T) {
          int ok = 0;
          for (const RankProfile& p : prof) ok += p.rank[T - 1] >= p.required;
          ResultRow r = BaseRow(c, "inca_" + c.mode, n);
          r.k = k;
          r.T = T;
          r.rho = mode == ViewMode::kCollusion ? level : 0.0;
          r.metric = "success_rate";
          r.value = static_cast<double>(ok) / c.trials;
          r.trials = c.trials;
          rows.push_back(r);
        }
      }
    }
  }
  return rows;
}

std::vector<ResultRow> RunMinIterations(const ExperimentConfig& c) {
  std::vector<ResultRow> rows;
  for (int n : c.n) {
    for (int k : c.k) {
      for (double rho : c.rho) {
        std::vector<int> first(c.trials, 0);
        ParallelFor(c.trials, c.workers, [&](int i) {
          first[i] = MinIterationsForTrial(n, k, rho, c.distinct, c.t_max,
                                           TrialSeed(c.seed, i));
        });
        const int min_t = *std::max_element(first.begin(), first.end());
        const int at_max = static_cast<int>(
            std::count_if(first.begin(), first.end(),
                          [&](int t) { return t <= c.t_max; }));
        ResultRow r = BaseRow(c, "inca_collusion", n);
        r.k = k;
        r.T = c.t_max;
        r.rho = rho;
        r.trials = c.trials;
        r.metric = "min_T";
        r.value = min_t;
        rows.push_back(r);
        r.metric = "success_rate";
        r.value = static_cast<double>(at_max) / c.trials;
        rows.push_back(r);
      }
    }
  }
  return rows;
}

std::vector<ResultRow> RunDropoutMse(const ExperimentConfig& c) {
  std::vector<ResultRow> rows;
  for (int n : c.n) {
    for (double rho : c.rho) {
      for (double gamma : c.gamma) {
        DropoutPoint p;
        p.n = n;
        p.epsilon = c.epsilon;
        p.delta = c.delta;
        p.rho = rho;
        p.gamma = gamma;
        p.alpha = c.alpha;
        for (int k : c.k) {
          for (int T : c.T) {
            p.k = k;
            p.T = T;
            Phase1 ph = IncaPhase1(p, c.trials, PhaseSeed(c.seed, 1),
                                   c.workers);
            const double mse = IncaPhase2(p, ph.worst, c.mse_trials,
                                          PhaseSeed(c.seed, 2), c.workers);
            rows.push_back(RowFor(p, c, "inca", "sigma_delta_sq", ph.worst,
                                  c.trials));
            rows.push_back(RowFor(p, c, "inca", "phase1_failures",
                                  ph.failures, c.trials));
            rows.push_back(RowFor(p, c, "inca", "mse", mse, c.mse_trials));
          }
        }
        p.k = c.gopa_k;
        p.T = 0;
        Phase1 gp = GopaPhase1(p, c.gopa_k, c.trials, PhaseSeed(c.seed, 3),
                               c.workers);
        rows.push_back(RowFor(p, c, "gopa", "sigma_delta_sq", gp.worst,
                              c.trials));
        for (const std::string& rule : c.gamma2) {
          const double g2 = ResolveGamma2(rule, gamma, n);
          ResultRow r = RowFor(p, c, "gopa", "mse",
                               GopaPhase2(p, c.gopa_k, g2, gp.worst,
                                          c.mse_trials, PhaseSeed(c.seed, 4),
                                          c.workers),
                               c.mse_trials);
          r.gamma2 = g2;
          rows.push_back(r);
        }
        const PrivacyBudget budget = PrivacyBudget::Make(c.epsilon, c.delta);
        const double pair = CompletePairwiseVariance(
            n - CountOf(rho, n), budget, DropoutSigmaInd(p));
        p.k = n - 1;
        rows.push_back(RowFor(p, c, "cordpdme_lower_bound", "mse",
                              CorDpDmeBound(n, gamma, pair,
                                            DropoutSigmaInd(p)),
                              0));
      }
    }
  }
  return rows;
}

std::vector<ResultRow> RunExperiment(const ExperimentConfig& config) {
  config.Validate();
  if (config.experiment == "accuracy_vs_collusion") {
    return RunAccuracyVsCollusion(config);
  }
  if (config.experiment == "success_rate") return RunSuccessRate(config);
  if (config.experiment == "min_iterations") return RunMinIterations(config);
  return RunDropoutMse(config);
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string CsvHeader() {
  return "experiment,method,n,k,T,epsilon,delta,rho,gamma,gamma2,alpha,metric,"
         "value,trials,seed";
}

std::string FormatCsv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << CsvHeader() << "\n";
  for (const ResultRow& r : rows) {
    out << r.experiment << ',' << r.method << ',' << r.n << ',' << r.k << ','
        << r.T << ',' << FormatDouble(r.epsilon) << ','
        << FormatDouble(r.delta) << ',' << FormatDouble(r.rho) << ','
        << FormatDouble(r.gamma) << ',' << FormatDouble(r.gamma2) << ','
        << FormatDouble(r.alpha) << ',' << r.metric << ','
        << FormatDouble(r.value) << ',' << r.trials << ',' << r.seed << "\n";
  }
  return out.str();
}

std::string FormatJson(const std::vector<ResultRow>& rows) {
  json doc = json::array();
  for (const ResultRow& r : rows) {
    doc.push_back({{"experiment", r.experiment}, {"method", r.method},
                   {"n", r.n},                   {"k", r.k},
                   {"T", r.T},                   {"epsilon", r.epsilon},
                   {"delta", r.delta},           {"rho", r.rho},
                   {"gamma", r.gamma},           {"gamma2", r.gamma2},
                   {"alpha", r.alpha},           {"metric", r.metric},
                   {"value", r.value},           {"trials", r.trials},
                   {"seed", r.seed}});
  }
  return DumpJson(doc);
}

std::vector<std::string> Emit(const std::vector<ResultRow>& rows,
                              const std::string& stem,
                              const std::string& format, bool plot) {
  if (rows.empty()) throw ConfigError("no result rows to emit");
  if (format != "csv" && format != "json") {
    throw ConfigError("format must be csv or json");
  }
  std::vector<std::string> paths;
  auto write = [&paths](const std::string& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path);
    f << body;
    paths.push_back(path);
  };
  write(stem + "." + format, format == "csv" ? FormatCsv(rows) : FormatJson(rows));
  if (plot) {
    const std::string svg = RenderSvg(rows);
    if (!svg.empty()) write(stem + ".svg", svg);
  }
  return paths;
}

}  // namespace inca
