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
// Attribute-inference attack simulation. The attacker is a k-nearest
// neighbor model over published features with a matching-group filter;
// Scenario I trains on original features of a leaked split, Scenario II on
// the published (obscured) features of that split. Exact private values of
// test users are read only to score.
#ifndef HYOBSCURE_ATTACK_HPP
#define HYOBSCURE_ATTACK_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "hyobscure/baselines.hpp"
#include "hyobscure/dataset.hpp"
#include "hyobscure/pipeline.hpp"
#include "hyobscure/rng.hpp"

namespace hyobscure {

enum class ScenarioKind { kScenarioOne, kScenarioTwo };

struct AttackScenario {
  ScenarioKind kind = ScenarioKind::kScenarioOne;
  double train_fraction = 0.2;
  std::size_t knn = 5;
  bool categorical = false;  // MAE when false, 1 - accuracy when true
};

namespace detail {

inline double sq_dist(const std::vector<double>& a,
                      const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace detail

inline double simulate_attack(const PublishedDataset& published,
                              const Dataset& ds, const AttackScenario& scenario,
                              std::uint64_t seed) {
  const std::size_t n = ds.user_count();
  if (published.records.size() != n) {
    throw std::invalid_argument("published data does not match dataset");
  }
  if (scenario.train_fraction <= 0.0 || scenario.train_fraction >= 1.0) {
    throw std::invalid_argument("train fraction must be in (0,1)");
  }
  std::vector<std::size_t> order(n);
  for (std::size_t u = 0; u < n; ++u) order[u] = u;
  Rng rng(seed);
  rng.shuffle(order);
  const std::size_t n_train = std::max<std::size_t>(
      1, static_cast<std::size_t>(scenario.train_fraction *
                                  static_cast<double>(n)));
  if (n_train >= n) throw std::invalid_argument("train split leaves no test user");
  if (n_train < scenario.knn) {
    throw std::invalid_argument("train split smaller than the neighborhood");
  }
  std::vector<std::size_t> train(order.begin(), order.begin() + n_train);
  std::vector<std::size_t> test(order.begin() + n_train, order.end());

  // Attacker-visible training features.
  auto train_features = [&](std::size_t u) -> const std::vector<double>& {
    return scenario.kind == ScenarioKind::kScenarioOne
               ? ds.records[u].features
               : published.records[u].features;
  };

  double err_sum = 0.0;
  std::vector<std::pair<double, std::size_t>> dists;
  for (std::size_t u : test) {
    const auto& x = published.records[u].features;
    const std::size_t g = published.records[u].group_index;
    dists.clear();
    for (std::size_t t : train) {
      if (published.records[t].group_index != g) continue;
      dists.push_back({detail::sq_dist(x, train_features(t)), t});
    }
    if (dists.size() < scenario.knn) {
      // Too few same-group neighbors: fall back to the whole split.
      dists.clear();
      for (std::size_t t : train) {
        dists.push_back({detail::sq_dist(x, train_features(t)), t});
      }
    }
    std::partial_sort(dists.begin(), dists.begin() + scenario.knn, dists.end());
    double prediction;
    if (scenario.categorical) {
      std::map<double, std::size_t> votes;
      for (std::size_t i = 0; i < scenario.knn; ++i) {
        ++votes[ds.records[dists[i].second].private_value];
      }
      prediction = votes.begin()->first;
      std::size_t best = 0;
      for (const auto& [value, count] : votes) {
        if (count > best) {
          best = count;
          prediction = value;
        }
      }
    } else {
      double mean = 0.0;
      for (std::size_t i = 0; i < scenario.knn; ++i) {
        mean += ds.records[dists[i].second].private_value;
      }
      prediction = mean / static_cast<double>(scenario.knn);
    }
    const double truth = ds.records[u].private_value;
    err_sum += scenario.categorical ? (prediction == truth ? 0.0 : 1.0)
                                    : std::abs(prediction - truth);
  }
  return err_sum / static_cast<double>(test.size());
}

enum class Method {
  kHyObscure,
  kRandom,
  kFrapp,
  kSimp,
  kDp,
  kPrivCheck,
  kXObf,
  kYGen
};

inline const char* method_name(Method m) {
  switch (m) {
    case Method::kHyObscure: return "hyobscure";
    case Method::kRandom: return "random";
    case Method::kFrapp: return "frapp";
    case Method::kSimp: return "simp";
    case Method::kDp: return "dp";
    case Method::kPrivCheck: return "privcheck";
    case Method::kXObf: return "xobf";
    case Method::kYGen: return "ygen";
  }
  return "?";
}

struct TradeoffPoint {
  Method method = Method::kHyObscure;
  double budget = 0.0;
  double realized_utility_loss = 0.0;
  double leakage_bits = 0.0;
  double attack_error = 0.0;
  double fano_lower_bound = 0.0;
  std::size_t seed_count = 0;
};

struct FailedCell {
  Method method;
  double budget;
  std::uint64_t seed;
  std::string error;
};

struct SweepResult {
  std::vector<TradeoffPoint> points;  // sorted by (method, budget)
  std::vector<FailedCell> failures;
  std::vector<std::uint64_t> seeds;
};

namespace detail {

struct ObscuredInstance {
  ObfuscationMatrix obf;
  GeneralizationFn gen;
  ClusterModel clusters;
};

// All baselines share the initial generalization; their single-parameter
// knobs are calibrated so the realized utility loss meets the budget.
inline ObscuredInstance run_method(const Dataset& ds, Method method,
                                   const PipelineConfig& cfg) {
  switch (method) {
    case Method::kHyObscure: {
      auto r = run_pipeline(ds, cfg);
      return {std::move(r.obf), std::move(r.gen), std::move(r.clusters)};
    }
    case Method::kXObf: {
      auto r = ablation_xobf(ds, cfg);
      return {std::move(r.obf), std::move(r.gen), std::move(r.clusters)};
    }
    case Method::kYGen: {
      auto r = ablation_ygen(ds, cfg);
      return {std::move(r.obf), std::move(r.gen), std::move(r.clusters)};
    }
    default:
      break;
  }
  ObscuredInstance res;
  res.clusters = cluster_users(ds, cfg.n_clusters, cfg.seed);
  const auto dist = distance_table(res.clusters.centroids, cfg.metric);
  res.gen = init_generalization(ds, cfg.gen_constraints, cfg.seed + 1);
  const auto gj = build_grouped_joint(ds, res.gen, res.clusters.assignment,
                                      cfg.n_clusters);
  const auto mass = gj.cluster_mass();
  const std::size_t n_groups = res.gen.group_count();
  const std::size_t n = cfg.n_clusters;
  switch (method) {
    case Method::kRandom:
      res.obf = calibrate_to_budget(
          [&](double p) { return random_obfuscation(n, p, n_groups); }, 0.0,
          1.0, true, mass, dist, cfg.budget);
      break;
    case Method::kFrapp:
      res.obf = calibrate_to_budget(
          [&](double g) { return frapp_obfuscation(n, g, n_groups); }, 1.0,
          1e9, false, mass, dist, cfg.budget);
      break;
    case Method::kSimp:
      res.obf = calibrate_to_budget(
          [&](double t) { return simp_obfuscation(dist, t, n_groups); }, 1e-6,
          1e9, true, mass, dist, cfg.budget);
      break;
    case Method::kDp:
      res.obf = calibrate_to_budget(
          [&](double b) { return dp_obfuscation(dist, b, n_groups); }, 0.0,
          1e9, false, mass, dist, cfg.budget);
      break;
    case Method::kPrivCheck:
      res.obf = privcheck_obfuscation(ds, res.clusters, dist, cfg.budget,
                                      n_groups, cfg.solver);
      break;
    default:
      throw std::logic_error("unreachable");
  }
  res.obf.budget = cfg.budget;
  return res;
}

}  // namespace detail

// One pipeline-or-baseline run per (method, budget, seed) cell; failures
// are recorded without aborting the sweep; points aggregate means over
// seeds, ordered by (method, budget).
inline SweepResult sweep(const Dataset& ds, const std::vector<Method>& methods,
                         const std::vector<double>& budgets,
                         const PipelineConfig& base_cfg,
                         const AttackScenario& scenario,
                         const std::vector<std::uint64_t>& seeds) {
  if (budgets.empty()) throw std::invalid_argument("empty budget grid");
  {
    const auto feas = feasibility_check(ds, base_cfg.gen_constraints);
    if (!feas.ok) throw InfeasibleError(feas.reason);
  }
  SweepResult out;
  out.seeds = seeds;
  for (Method method : methods) {
    for (double budget : budgets) {
      TradeoffPoint pt;
      pt.method = method;
      pt.budget = budget;
      for (std::uint64_t seed : seeds) {
        PipelineConfig cfg = base_cfg;
        cfg.budget = budget;
        cfg.seed = seed;
        try {
          const auto inst = detail::run_method(ds, method, cfg);
          const auto gj = build_grouped_joint(ds, inst.gen,
                                              inst.clusters.assignment,
                                              cfg.n_clusters);
          const auto dist =
              distance_table(inst.clusters.centroids, cfg.metric);
          const double leak = clamp_bits(leakage(gj, inst.obf));
          const auto published =
              publish(ds, inst.obf, inst.gen, inst.clusters, seed + 3);
          pt.realized_utility_loss += utility_loss(gj, inst.obf, dist);
          pt.leakage_bits += leak;
          pt.attack_error +=
              simulate_attack(published, ds, scenario, seed + 4);
          pt.fano_lower_bound +=
              fano_bound(gj.h_y(), leak, ds.domain_size());
          ++pt.seed_count;
        } catch (const std::exception& e) {
          out.failures.push_back({method, budget, seed, e.what()});
        }
      }
      if (pt.seed_count > 0) {
        const double denom = static_cast<double>(pt.seed_count);
        pt.realized_utility_loss /= denom;
        pt.leakage_bits /= denom;
        pt.attack_error /= denom;
        pt.fano_lower_bound /= denom;
      }
      out.points.push_back(pt);
    }
  }
  return out;
}

}  // namespace hyobscure

#endif  // HYOBSCURE_ATTACK_HPP
