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

// inca_lab: simulate the protocol, calibrate noise, check rank preconditions,
// run experiments and baselines.
//
// Exit codes: 0 success, 2 configuration error, 3 rank precondition failure,
// 4 numerical-conditioning failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "inca/accountant.h"
#include "inca/adversary.h"
#include "inca/baselines.h"
#include "inca/harness.h"
#include "inca/protocol.h"
#include "inca/rng.h"
#include "inca/serialize.h"
#include "inca/topology.h"
#include "inca/types.h"

namespace {

using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitConditioning = 4;

struct Global {
  uint64_t seed = 1;
  int trials = 0;  // 0 keeps the command's default
  std::string out;
  std::string format = "csv";
  bool plot = false;
  int workers = 1;
};

struct Instance {
  int n = 20;
  int k = 1;
  int T = 10;
  double gamma = 0.0;
  std::string mode = "eavesdrop";
  double level = 0.5;  // observe fraction or corrupted fraction
  bool distinct = false;
};

void AddInstanceFlags(CLI::App* cmd, Instance* inst) {
  cmd->add_option("--n", inst->n, "Number of parties")->capture_default_str();
  cmd->add_option("--k", inst->k, "Out-degree per iteration")
      ->capture_default_str();
  cmd->add_option("--T", inst->T, "Iterations")->capture_default_str();
  cmd->add_option("--gamma", inst->gamma, "Dropout fraction")
      ->capture_default_str();
  cmd->add_option("--mode", inst->mode, "eavesdrop or collusion")
      ->capture_default_str();
  cmd->add_option("--level", inst->level,
                  "Observed fraction (eavesdrop) or corrupted fraction "
                  "(collusion)")
      ->capture_default_str();
  cmd->add_flag("--distinct", inst->distinct,
                "Never reuse a neighbor across iterations");
}

inca::ViewMode ParseViewMode(const std::string& mode) {
  if (mode == "eavesdrop") return inca::ViewMode::kEavesdrop;
  if (mode == "collusion") return inca::ViewMode::kCollusion;
  throw inca::ConfigError("unknown mode: " + mode);
}

struct Built {
  inca::CommSchedule schedule;
  inca::OnlineHistory history;
  std::vector<inca::SparseMat> effective;
  inca::AdversaryView view;
};

Built BuildInstance(const Instance& inst, uint64_t seed) {
  if (inst.n < 2 || inst.k < 1 || inst.T < 1) {
    throw inca::ConfigError("need n >= 2, k >= 1, T >= 1");
  }
  if (inst.level < 0.0 || inst.level > 1.0) {
    throw inca::ConfigError("level must lie in [0, 1]");
  }
  Built b;
  b.schedule =
      inca::RandomKOutSchedule(inst.n, inst.k, inst.T, seed, inst.distinct);
  b.history = inca::SampleDropouts(inst.n, inst.T, inst.gamma, seed);
  b.effective = inca::EffectiveWeights(b.schedule, b.history);
  if (ParseViewMode(inst.mode) == inca::ViewMode::kEavesdrop) {
    b.view = inca::BuildEavesdropView(inst.n, inst.T, inst.level, seed);
  } else {
    b.view = inca::BuildCollusionView(
        b.effective, b.history, inca::SampleCorrupted(inst.n, inst.level, seed));
  }
  return b;
}

void WriteText(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw inca::ConfigError("cannot write " + path);
  f << text;
}

std::string WithNewline(std::string text) {
  if (text.empty() || text.back() != '\n') text.push_back('\n');
  return text;
}

std::string ReadText(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw inca::ConfigError("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void EmitRows(const std::vector<inca::ResultRow>& rows, const Global& g) {
  if (g.out.empty()) {
    if (g.format == "json") {
      std::cout << inca::FormatJson(rows);
    } else if (g.format == "csv") {
      std::cout << inca::FormatCsv(rows);
    } else {
      throw inca::ConfigError("unknown format: " + g.format);
    }
    if (g.plot) throw inca::ConfigError("--plot needs --out");
    return;
  }
  for (const std::string& path : inca::Emit(rows, g.out, g.format, g.plot)) {
    std::cerr << "wrote " << path << "\n";
  }
}

struct SimulateArgs {
  Instance inst;
  std::string split = "incremental";
  double sigma_ind_sq = 1.0;
  double sigma_delta_sq = 1.0;
};

int RunSimulate(const SimulateArgs& a, const Global& g) {
  Built b = BuildInstance(a.inst, g.seed);
  inca::ProtocolConfig config;
  config.n = a.inst.n;
  config.T = a.inst.T;
  config.sigma_ind_sq = a.sigma_ind_sq;
  config.split =
      inca::MakeSplit(inca::ParseSplitKind(a.split), a.inst.T, a.sigma_delta_sq);
  config.seed = g.seed;
  config.Validate();
  inca::SplitMix64 rng(inca::DeriveSeed(g.seed, inca::Stream::kInput));
  Eigen::VectorXd x(a.inst.n);
  for (int i = 0; i < a.inst.n; ++i) x(i) = rng.Uniform();
  inca::Transcript tr = inca::RunInca(config, b.schedule, b.history, x);
  json doc = inca::TranscriptJson(config, b.schedule, b.history, tr);
  doc["estimate"] = inca::Disseminate(tr, b.history);
  doc["mean_x"] = tr.inputs.mean();
  doc["mean_x_noisy"] = tr.inputs_noisy.mean();
  inca::TranscriptCheck check = inca::CheckTranscript(tr, b.history);
  doc["check"] = {{"column_stochastic", check.column_stochastic},
                  {"injection", check.injection},
                  {"mass", check.mass}};
  WriteText(g.out, WithNewline(inca::DumpJson(doc)));
  return 0;
}

struct CalibrateArgs {
  Instance inst;
  std::string theorem = "nodrop";
  double epsilon = 0.1;
  double delta = 1e-5;
  double alpha = 1.3;
  double sigma_ind_sq = 0.0;
  std::string split = "incremental";
  bool check = false;
};

int RunCalibrate(const CalibrateArgs& a, const Global& g) {
  Built b = BuildInstance(a.inst, g.seed);
  const inca::PrivacyBudget budget = inca::PrivacyBudget::Make(a.epsilon, a.delta);
  inca::NoiseSplit split =
      inca::MakeSplit(inca::ParseSplitKind(a.split), a.inst.T, 0.0);
  Eigen::VectorXd w = inca::InjectedWeights(split, b.history);
  inca::AdversarySystem system =
      inca::BuildLinearSystem(b.effective, b.history, split, b.view);
  inca::CalibrationOptions opts;
  opts.theorem = inca::ParseTheorem(a.theorem);
  opts.alpha = a.alpha;
  opts.sigma_ind_sq = a.sigma_ind_sq;
  inca::CalibrationResult r = inca::Calibrate(
      budget, system, inca::EdgeVectors(b.effective, b.history, b.view, w), w,
      b.history, opts);
  json doc = inca::ToJson(r);
  if (r.ok && a.check) {
    double worst = 0.0;
    const bool dp = inca::AbstractDpCheck(budget, system, r.sigma_ind_sq,
                                          r.sigma_delta_sq, &worst);
    Eigen::VectorXd sigma_e(system.l.cols() + system.n.cols());
    sigma_e.head(system.l.cols()).setConstant(r.sigma_ind_sq);
    sigma_e.tail(system.n.cols()).setConstant(r.sigma_delta_sq);
    doc["abstract_dp_check"] = dp;
    doc["abstract_dp_worst"] = worst;
    doc["cap"] = budget.Cap();
    doc["sdp_feasibility_check"] =
        inca::SdpFeasibilityCheck(budget, system, sigma_e);
    doc["noise_difference_quantity"] = inca::NoiseDifferenceQuantity(r);
  }
  WriteText(g.out, WithNewline(inca::DumpJson(doc)));
  switch (r.status) {
    case inca::CalibrationStatus::kOk:
      return 0;
    case inca::CalibrationStatus::kRankPrecondition:
      return kExitPrecondition;
    case inca::CalibrationStatus::kBelowBound:
      return kExitConfig;
    case inca::CalibrationStatus::kNonPositiveMargin:
    case inca::CalibrationStatus::kInconsistent:
      return kExitConditioning;
  }
  return kExitConditioning;
}

int RunRankCheck(const Instance& inst, const Global& g) {
  Built b = BuildInstance(inst, g.seed);
  inca::NoiseSplit split = inca::MakeIncremental(inst.T, 0.0);
  Eigen::VectorXd w = inca::InjectedWeights(split, b.history);
  inca::EdgeVectorSet edges =
      inca::EdgeVectors(b.effective, b.history, b.view, w);
  const int rank = inca::RankCount(edges);
  std::vector<int> honest = b.view.Honest();
  const int required = static_cast<int>(honest.size()) - 1;
  inca::HiddenGraph graph =
      inca::BuildHiddenGraph(b.effective, b.history, b.view);
  json doc = {{"n", inst.n},
              {"k", inst.k},
              {"T", inst.T},
              {"mode", inst.mode},
              {"level", inst.level},
              {"seed", g.seed},
              {"honest", honest.size()},
              {"edge_vectors", edges.vectors.size()},
              {"rank", rank},
              {"required", required},
              {"hidden_edges", graph.EdgeCount()},
              {"strongly_connected", inca::IsStronglyConnected(graph)},
              {"success", rank >= required}};
  WriteText(g.out, WithNewline(inca::DumpJson(doc)));
  return rank >= required ? 0 : kExitPrecondition;
}

int RunExperimentCmd(const std::string& name, const std::string& config_path,
                     const Global& g, bool seed_given) {
  inca::ExperimentConfig config;
  if (!config_path.empty()) {
    config = inca::ParseExperimentConfig(ReadText(config_path));
    if (config.experiment != name) {
      throw inca::ConfigError("config is for experiment '" + config.experiment +
                              "', not '" + name + "'");
    }
  } else {
    json doc = {{"experiment", name}};
    config = inca::ParseExperimentConfig(doc.dump());
  }
  if (seed_given) config.seed = g.seed;
  if (g.trials > 0) config.trials = g.trials;
  config.workers = g.workers;
  config.plot = g.plot;
  config.Validate();
  Global out = g;
  if (out.out.empty()) out.out = name;
  EmitRows(inca::RunExperiment(config), out);
  return 0;
}

struct BaselineArgs {
  int n = 1024;
  int k = 20;
  double epsilon = 0.1;
  double delta = 1e-5;
  double rho = 0.0;
  double gamma = 0.0;
  std::string gamma2 = "gamma/2";
  double alpha = 1.3;
};

inca::ResultRow BaselineRow(const BaselineArgs& a, const Global& g,
                            const std::string& method,
                            const std::string& metric, double value,
                            int trials) {
  inca::ResultRow r;
  r.experiment = "baseline";
  r.method = method;
  r.n = a.n;
  r.epsilon = a.epsilon;
  r.delta = a.delta;
  r.rho = a.rho;
  r.gamma = a.gamma;
  r.alpha = a.alpha;
  r.metric = metric;
  r.value = value;
  r.trials = trials;
  r.seed = g.seed;
  return r;
}

int RunBaseline(const std::string& name, const BaselineArgs& a,
                const Global& g) {
  std::vector<inca::ResultRow> rows;
  if (name == "central") {
    rows.push_back(BaselineRow(a, g, name, "mse",
                               inca::CentralDpMse(a.n, a.epsilon, a.delta), 1));
  } else if (name == "local") {
    rows.push_back(BaselineRow(a, g, name, "mse",
                               inca::LocalDpMse(a.n, a.epsilon, a.delta), 1));
  } else if (name == "muffliato") {
    inca::MuffliatoResult m = inca::MuffliatoMse(a.n, a.epsilon, a.delta);
    inca::ResultRow r =
        BaselineRow(a, g, "muffliato_appendix_bound", "mse", m.mse, 1);
    r.k = m.degree;
    r.T = m.iterations;
    rows.push_back(r);
    r.metric = "sigma_sq";
    r.value = m.sigma_sq;
    rows.push_back(r);
  } else if (name == "gopa" || name == "cordpdme") {
    inca::DropoutPoint p;
    p.n = a.n;
    p.k = a.k;
    p.T = 0;
    p.epsilon = a.epsilon;
    p.delta = a.delta;
    p.rho = a.rho;
    p.gamma = a.gamma;
    p.alpha = a.alpha;
    const double sigma_ind_sq = inca::DropoutSigmaInd(p);
    if (name == "gopa") {
      const int trials = g.trials > 0 ? g.trials : 100;
      const uint64_t s1 = inca::DeriveSeed(g.seed, {3});
      const uint64_t s2 = inca::DeriveSeed(g.seed, {4});
      inca::Phase1 ph = inca::GopaPhase1(p, a.k, trials, s1, g.workers);
      const double gamma2 = inca::ResolveGamma2(a.gamma2, a.gamma, a.n);
      const double mse =
          inca::GopaPhase2(p, a.k, gamma2, ph.worst, trials, s2, g.workers);
      inca::ResultRow r =
          BaselineRow(a, g, "gopa", "sigma_delta_sq", ph.worst, trials);
      r.k = a.k;
      r.gamma2 = gamma2;
      rows.push_back(r);
      r.metric = "mse";
      r.value = mse;
      rows.push_back(r);
    } else {
      const int honest = a.n - inca::CountOf(a.rho, a.n);
      const double pair = inca::CompletePairwiseVariance(
          honest, inca::PrivacyBudget::Make(a.epsilon, a.delta), sigma_ind_sq);
      inca::ResultRow r = BaselineRow(
          a, g, "cordpdme_lower_bound", "mse",
          inca::CorDpDmeBound(a.n, a.gamma, pair, sigma_ind_sq), 1);
      r.k = a.n - 1;
      rows.push_back(r);
    }
  } else {
    throw inca::ConfigError("unknown baseline: " + name);
  }
  EmitRows(rows, g);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation lab for private decentralized mean estimation"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
  app.add_option("--trials", g.trials, "Trials per point (0 = default)");
  app.add_option("--out", g.out,
                 "Output file (simulate, calibrate, rank-check) or stem "
                 "(experiment, baseline)");
  app.add_option("--format", g.format, "csv or json")->capture_default_str();
  app.add_flag("--plot", g.plot, "Also write an SVG chart");
  app.add_option("--workers", g.workers, "Worker threads")
      ->capture_default_str();

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Run the protocol once");
  AddInstanceFlags(simulate, &sim.inst);
  simulate->add_option("--split", sim.split, "early or incremental")
      ->capture_default_str();
  simulate->add_option("--sigma-ind-sq", sim.sigma_ind_sq)->capture_default_str();
  simulate->add_option("--sigma-delta-sq", sim.sigma_delta_sq)
      ->capture_default_str();

  CalibrateArgs cal;
  CLI::App* calibrate =
      app.add_subcommand("calibrate", "Calibrate noise for one instance");
  AddInstanceFlags(calibrate, &cal.inst);
  calibrate->add_option("--theorem", cal.theorem, "nodrop, totalsum, coalition")
      ->capture_default_str();
  calibrate->add_option("--epsilon", cal.epsilon)->capture_default_str();
  calibrate->add_option("--delta", cal.delta)->capture_default_str();
  calibrate->add_option("--alpha", cal.alpha)->capture_default_str();
  calibrate->add_option("--sigma-ind-sq", cal.sigma_ind_sq,
                        "Independent variance (0 = alpha times the bound)");
  calibrate->add_option("--split", cal.split)->capture_default_str();
  calibrate->add_flag("--check", cal.check,
                      "Also run the covariance and block PSD checks");

  Instance rc;
  CLI::App* rank_check =
      app.add_subcommand("rank-check", "Check the edge-vector rank condition");
  AddInstanceFlags(rank_check, &rc);

  std::string experiment_name;
  std::string config_path;
  CLI::App* experiment =
      app.add_subcommand("experiment", "Run a configured experiment");
  experiment
      ->add_option("name", experiment_name,
                   "accuracy_vs_collusion, success_rate, min_iterations, "
                   "dropout_mse")
      ->required();
  experiment->add_option("--config", config_path, "JSON configuration file");

  std::string baseline_name;
  BaselineArgs base;
  CLI::App* baseline = app.add_subcommand("baseline", "Evaluate a baseline");
  baseline
      ->add_option("name", baseline_name,
                   "central, local, muffliato, gopa, cordpdme")
      ->required();
  baseline->add_option("--n", base.n)->capture_default_str();
  baseline->add_option("--k", base.k, "GOPA partners per party")
      ->capture_default_str();
  baseline->add_option("--epsilon", base.epsilon)->capture_default_str();
  baseline->add_option("--delta", base.delta)->capture_default_str();
  baseline->add_option("--rho", base.rho)->capture_default_str();
  baseline->add_option("--gamma", base.gamma)->capture_default_str();
  baseline->add_option("--gamma2", base.gamma2,
                       "gamma/2, gamma/4, 1/n or a number")
      ->capture_default_str();
  baseline->add_option("--alpha", base.alpha)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (g.workers < 1) throw inca::ConfigError("--workers must be >= 1");
    if (g.trials < 0) throw inca::ConfigError("--trials must be >= 0");
    if (*simulate) return RunSimulate(sim, g);
    if (*calibrate) return RunCalibrate(cal, g);
    if (*rank_check) return RunRankCheck(rc, g);
    if (*experiment) {
      return RunExperimentCmd(experiment_name, config_path, g,
                              app.count("--seed") > 0);
    }
    if (*baseline) return RunBaseline(baseline_name, base, g);
  } catch (const inca::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const inca::PreconditionError& e) {
    std::cerr << "precondition failure: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const inca::ConditioningError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitConditioning;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConditioning;
  }
  return 0;
}
