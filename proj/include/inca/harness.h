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

#ifndef INCA_HARNESS_H_
#define INCA_HARNESS_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "inca/accountant.h"
#include "inca/protocol.h"
#include "inca/types.h"

namespace inca {

struct ExperimentConfig {
  std::string experiment;  // accuracy_vs_collusion | success_rate |
                           // min_iterations | dropout_mse
  std::vector<int> n = {100};
  std::vector<int> k = {1};
  std::vector<int> T = {10};
  std::vector<double> rho = {0.0};
  std::vector<double> gamma = {0.0};
  // GOPA rollback-round dropout rates, as rules: "gamma/2", "gamma/4",
  // "1/n", or a number.
  std::vector<std::string> gamma2 = {"gamma/2"};
  double epsilon = 0.1;
  double delta = 1e-5;
  double alpha = 1.3;
  double observe_fraction = 0.5;
  std::string mode = "eavesdrop";  // eavesdrop | collusion
  bool distinct = false;
  bool muffliato = true;
  int gopa_k = 20;
  int t_max = 20;
  int trials = 100;      // seeds per point, or phase-1 runs
  int mse_trials = 1000; // phase-2 runs of dropout_mse
  uint64_t seed = 1;
  int workers = 1;
  bool plot = false;

  void Validate() const;
};

// Parses a JSON document; unknown keys are rejected. Throws ConfigError.
ExperimentConfig ParseExperimentConfig(const std::string& json_text);

struct ResultRow {
  std::string experiment;
  std::string method;
  int n = 0;
  int k = 0;
  int T = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  double rho = 0.0;
  double gamma = 0.0;
  double gamma2 = 0.0;
  double alpha = 0.0;
  std::string metric;
  double value = 0.0;
  int trials = 0;
  uint64_t seed = 0;
};

// Seed of trial `index` under master seed `seed`.
uint64_t TrialSeed(uint64_t seed, int index);

// Runs fn(i) for i in [0, count) on `workers` threads. Callers write results
// into slot i, so the outcome does not depend on scheduling.
void ParallelFor(int count, int workers, const std::function<void(int)>& fn);

// One trial of the no-dropout rank precondition:
// edge-vector rank >= n^H - 1.
struct RankTrial {
  int rank = 0;
  int required = 0;
  bool success = false;
};
RankTrial RankCheckTrial(int n, int k, int T, ViewMode mode, double level,
                         bool distinct, uint64_t trial_seed);

// Edge-vector rank of one trial for every horizon T in [1, t_max], computed
// in a single incremental pass. rank[T - 1] belongs to horizon T.
struct RankProfile {
  int required = 0;
  std::vector<int> rank;
  // Smallest T meeting the precondition, or t_max + 1.
  int FirstSuccess() const;
};
RankProfile RankProfileTrial(int n, int k, int t_max, ViewMode mode,
                             double level, bool distinct, uint64_t trial_seed);

// Fraction of trials whose precondition holds.
double SuccessRate(int n, int k, int T, ViewMode mode, double level,
                   bool distinct, int trials, uint64_t seed, int workers = 1);

// Smallest T in [1, t_max] meeting the precondition for one trial, or
// t_max + 1. Relies on schedules and views being prefix-consistent in T.
int MinIterationsForTrial(int n, int k, double rho, bool distinct, int t_max,
                          uint64_t trial_seed);

struct DropoutPoint {
  int n = 200;
  int k = 1;
  int T = 20;
  double epsilon = 0.2;
  double delta = 1e-5;
  double rho = 0.1;
  double gamma = 0.1;
  double alpha = 1.3;
};

// alpha * 2 ln(1.25/delta) / (n (1 - gamma - rho) epsilon^2).
double DropoutSigmaInd(const DropoutPoint& p);

struct Phase1 {
  double worst = 0.0;  // worst-case variance over successful runs
  int runs = 0;
  int failures = 0;    // precondition or numerical failures
  double max_residual = 0.0;
};

// IncA phase 1: coalition calibration per run, worst sigma_delta^2.
Phase1 IncaPhase1(const DropoutPoint& p, int runs, uint64_t seed,
                  int workers = 1);
// IncA phase 2: MSE of the weighted estimate against mean(x).
double IncaPhase2(const DropoutPoint& p, double sigma_delta_sq, int runs,
                  uint64_t seed, int workers = 1);

// GOPA phase 1 over random k-partner graphs: worst sigma_pair^2.
Phase1 GopaPhase1(const DropoutPoint& p, int gopa_k, int runs, uint64_t seed,
                  int workers = 1);
double GopaPhase2(const DropoutPoint& p, int gopa_k, double gamma2,
                  double sigma_pair_sq, int runs, uint64_t seed,
                  int workers = 1);

double ResolveGamma2(const std::string& rule, double gamma, int n);

std::vector<ResultRow> RunAccuracyVsCollusion(const ExperimentConfig& config);
std::vector<ResultRow> RunSuccessRate(const ExperimentConfig& config);
std::vector<ResultRow> RunMinIterations(const ExperimentConfig& config);
std::vector<ResultRow> RunDropoutMse(const ExperimentConfig& config);
std::vector<ResultRow> RunExperiment(const ExperimentConfig& config);

// Fixed column order:
// experiment,method,n,k,T,epsilon,delta,rho,gamma,gamma2,alpha,metric,value,
// trials,seed
std::string CsvHeader();
std::string FormatCsv(const std::vector<ResultRow>& rows);
std::string FormatJson(const std::vector<ResultRow>& rows);

// Line chart of metric against the swept parameter, one series per method
// and fixed-parameter combination. Empty string when nothing is plottable.
std::string RenderSvg(const std::vector<ResultRow>& rows);

// Writes <stem>.csv or <stem>.json and, when plot is set, <stem>.svg.
// Throws ConfigError on empty rows. Returns the written paths.
std::vector<std::string> Emit(const std::vector<ResultRow>& rows,
                              const std::string& stem,
                              const std::string& format, bool plot);

// Decimal with 17 significant digits.
std::string FormatDouble(double v);

}  // namespace inca

#endif  // INCA_HARNESS_H_
