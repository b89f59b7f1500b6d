// Copyright 2026 The HyObscure Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Command-line driver. Subcommands:
//   synth    generate a synthetic correlated population CSV
//   obscure  run the full pipeline, write published CSV + report JSON
//   sweep    budget-sweep tradeoff experiment, write plot-ready CSV
//   attack   score a published file with the kNN attacker
//   check    re-verify the theorem assertions recorded in a report
// Exit codes: 0 success, 1 usage error, 2 infeasibility, 3 solver warning.

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hyobscure/attack.hpp"
#include "hyobscure/baselines.hpp"
#include "hyobscure/io.hpp"
#include "hyobscure/pipeline.hpp"

namespace {

using namespace hyobscure;

struct CommonOpts {
  std::string config_path;
  std::size_t k = 100, alpha = 200, l = 4, beta = 8, groups = 4, clusters = 10;
  double budget = 0.0;
  double delta = 0.0001;
  std::string metric = "euclidean";
  std::uint64_t seed = 0;
};

// Config file supplies defaults; explicitly passed flags override it.
void apply_config_file(const CLI::App& cmd, CommonOpts& o) {
  if (o.config_path.empty()) return;
  std::ifstream in(o.config_path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + o.config_path);
  nlohmann::json j;
  in >> j;
  auto set = [&](const char* key, auto& field, const std::string& flag) {
    if (j.contains(key) && cmd.count(flag) == 0) {
      field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
    }
  };
  set("k", o.k, "--k");
  set("alpha", o.alpha, "--alpha");
  set("l", o.l, "--l");
  set("beta", o.beta, "--beta");
  set("groups", o.groups, "--groups");
  set("clusters", o.clusters, "--clusters");
  set("budget", o.budget, "--budget");
  set("delta", o.delta, "--delta");
  set("metric", o.metric, "--metric");
  set("seed", o.seed, "--seed");
}

PipelineConfig to_pipeline_config(const CommonOpts& o) {
  PipelineConfig cfg;
  cfg.gen_constraints = {o.k, o.alpha, o.l, o.beta, o.groups};
  cfg.n_clusters = o.clusters;
  cfg.budget = o.budget;
  cfg.delta = o.delta;
  cfg.seed = o.seed;
  if (o.metric == "euclidean") {
    cfg.metric = DistanceMetric::kEuclidean;
  } else if (o.metric == "js") {
    cfg.metric = DistanceMetric::kJsDivergence;
  } else {
    throw CLI::ValidationError("--metric", "must be euclidean or js");
  }
  return cfg;
}

void add_common_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "JSON config file");
  cmd->add_option("--k", o.k, "min users per group");
  cmd->add_option("--alpha", o.alpha, "max users per group");
  cmd->add_option("--l", o.l, "min distinct values per group");
  cmd->add_option("--beta", o.beta, "max distinct values per group");
  cmd->add_option("--groups", o.groups, "number of generalized groups");
  cmd->add_option("--clusters", o.clusters, "number of user clusters");
  cmd->add_option("--budget", o.budget, "utility-loss budget");
  cmd->add_option("--delta", o.delta, "convergence threshold");
  cmd->add_option("--metric", o.metric, "euclidean|js");
  cmd->add_option("--seed", o.seed, "random seed");
}

std::vector<Method> parse_methods(const std::string& csv) {
  std::vector<Method> methods;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "hyobscure") methods.push_back(Method::kHyObscure);
    else if (tok == "random") methods.push_back(Method::kRandom);
    else if (tok == "frapp") methods.push_back(Method::kFrapp);
    else if (tok == "simp") methods.push_back(Method::kSimp);
    else if (tok == "dp") methods.push_back(Method::kDp);
    else if (tok == "privcheck") methods.push_back(Method::kPrivCheck);
    else if (tok == "xobf") methods.push_back(Method::kXObf);
    else if (tok == "ygen") methods.push_back(Method::kYGen);
    else throw CLI::ValidationError("--methods", "unknown method " + tok);
  }
  if (methods.empty()) throw CLI::ValidationError("--methods", "empty list");
  return methods;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HyObscure: hybrid obscuring for privacy-preserving data "
               "publishing"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic population");
  std::size_t synth_n = 1000, synth_clusters = 10, synth_domain = 16;
  double synth_corr = 0.7;
  std::uint64_t synth_seed = 0;
  std::string synth_out = "synth.csv";
  synth->add_option("--n", synth_n, "number of users");
  synth->add_option("--clusters", synth_clusters, "number of blobs");
  synth->add_option("--domain", synth_domain, "private domain size");
  synth->add_option("--correlation", synth_corr, "cluster-value correlation");
  synth->add_option("--seed", synth_seed, "random seed");
  synth->add_option("--out", synth_out, "output CSV path");

  // obscure
  auto* obscure = app.add_subcommand("obscure", "run the obscuring pipeline");
  CommonOpts oo;
  std::string obscure_input, obscure_private = "y", obscure_id = "user_id", obscure_out = ".";
  obscure->add_option("--input", obscure_input, "input CSV")->required();
  obscure->add_option("--private", obscure_private, "private column name");
  obscure->add_option("--id", obscure_id, "id column name (optional)");
  obscure->add_option("--out", obscure_out, "output directory");
  add_common_flags(obscure, oo);

  // sweep
  auto* sw = app.add_subcommand("sweep", "budget-sweep tradeoff experiment");
  CommonOpts so;
  std::string sweep_input, sweep_private = "y", sweep_id = "user_id";
  std::string sweep_methods = "hyobscure,privcheck,random";
  std::string sweep_budgets = "0.1,0.2,0.4";
  std::string sweep_seeds = "1";
  std::string sweep_out = "sweep.csv";
  int sweep_scenario = 1;
  double sweep_train_fraction = 0.2;
  std::size_t sweep_knn = 5;
  sw->add_option("--input", sweep_input, "input CSV")->required();
  sw->add_option("--private", sweep_private, "private column name");
  sw->add_option("--id", sweep_id, "id column name (optional)");
  sw->add_option("--methods", sweep_methods, "comma-separated method list");
  sw->add_option("--budgets", sweep_budgets, "comma-separated budget grid");
  sw->add_option("--seeds", sweep_seeds, "comma-separated seeds");
  sw->add_option("--scenario", sweep_scenario, "attack scenario (1|2)");
  sw->add_option("--train-fraction", sweep_train_fraction, "attacker split");
  sw->add_option("--knn", sweep_knn, "attacker neighborhood size");
  sw->add_option("--out", sweep_out, "output CSV path");
  add_common_flags(sw, so);

  // attack
  auto* at = app.add_subcommand("attack", "score a published file");
  std::string at_input, at_published, at_private = "y", at_id = "user_id";
  int at_scenario = 1;
  double at_train_fraction = 0.2;
  std::size_t at_knn = 5;
  std::uint64_t at_seed = 0;
  bool at_categorical = false;
  at->add_option("--input", at_input, "original CSV")->required();
  at->add_option("--published", at_published, "published CSV")->required();
  at->add_option("--private", at_private, "private column name");
  at->add_option("--id", at_id, "id column name (optional)");
  at->add_option("--scenario", at_scenario, "attack scenario (1|2)");
  at->add_option("--train-fraction", at_train_fraction, "attacker split");
  at->add_option("--knn", at_knn, "neighborhood size");
  at->add_option("--seed", at_seed, "random seed");
  at->add_flag("--categorical", at_categorical, "score 1-accuracy");

  // check
  auto* check = app.add_subcommand("check", "verify theorems on a report");
  std::string check_report;
  check->add_option("--report", check_report, "report JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (synth->parsed()) {
      const auto ds = synth_population(synth_n, synth_clusters, synth_domain,
                                       synth_corr, synth_seed);
      export_csv(ds, synth_out);
      std::cout << "wrote " << synth_out << " (" << ds.user_count()
                << " users)\n";
      return 0;
    }

    if (obscure->parsed()) {
      apply_config_file(*obscure, oo);
      const auto ds = load_csv(obscure_input, {obscure_private, obscure_id});
      const auto cfg = to_pipeline_config(oo);
      const auto res = run_pipeline(ds, cfg);
      const auto published =
          publish(ds, res.obf, res.gen, res.clusters, cfg.seed + 3);
      std::filesystem::create_directories(obscure_out);
      write_published(published, obscure_out + "/published.csv");
      write_report(res.report, obscure_out + "/report.json");
      std::cout << "final leakage: " << res.report.final_leakage_bits
                << " bits, utility loss: " << res.report.final_utility_loss
                << "\n";
      if (res.report.solver_warning) {
        std::cerr << "warning: solver gap certificate not reached\n";
        return 3;
      }
      return 0;
    }

    if (sw->parsed()) {
      apply_config_file(*sw, so);
      const auto ds = load_csv(sweep_input, {sweep_private, sweep_id});
      const auto cfg = to_pipeline_config(so);
      AttackScenario scenario;
      scenario.kind = sweep_scenario == 2 ? ScenarioKind::kScenarioTwo
                                          : ScenarioKind::kScenarioOne;
      scenario.train_fraction = sweep_train_fraction;
      scenario.knn = sweep_knn;
      std::vector<double> budgets;
      std::vector<std::uint64_t> seeds;
      {
        std::stringstream bs(sweep_budgets), ss(sweep_seeds);
        std::string tok;
        while (std::getline(bs, tok, ',')) budgets.push_back(std::stod(tok));
        while (std::getline(ss, tok, ',')) seeds.push_back(std::stoull(tok));
      }
      const auto result = sweep(ds, parse_methods(sweep_methods), budgets, cfg,
                                scenario, seeds);
      write_sweep_csv(result, sweep_out);
      std::cout << "wrote " << sweep_out << " (" << result.points.size()
                << " points, " << result.failures.size() << " failed cells)\n";
      for (const auto& f : result.failures) {
        std::cerr << "failed cell: " << method_name(f.method) << " budget "
                  << f.budget << " seed " << f.seed << ": " << f.error << "\n";
      }
      return 0;
    }

    if (at->parsed()) {
      const auto ds = load_csv(at_input, {at_private, at_id});
      const auto published = read_published(at_published, ds);
      AttackScenario scenario;
      scenario.kind = at_scenario == 2 ? ScenarioKind::kScenarioTwo
                                       : ScenarioKind::kScenarioOne;
      scenario.train_fraction = at_train_fraction;
      scenario.knn = at_knn;
      scenario.categorical = at_categorical;
      const double err = simulate_attack(published, ds, scenario, at_seed);
      std::cout << "attack_error: " << err << "\n";
      return 0;
    }

    if (check->parsed()) {
      const auto report = read_report(check_report);
      const auto findings = verify_theorems(report);
      bool ok = true;
      for (const auto& f : findings) {
        std::cout << f.name << ": " << (f.ok ? "pass" : "FAIL " + f.detail)
                  << "\n";
        ok = ok && f.ok;
      }
      return ok ? 0 : 1;
    }
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
