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
// The hybrid obscuring driver: generalization initialization, cross
// iteration of the obfuscation solve and the boundary-boosting search until
// the leakage improvement drops below delta, final data obscuring, and
// runtime verification of the convergence and leakage-bound guarantees.
#ifndef HYOBSCURE_PIPELINE_HPP
#define HYOBSCURE_PIPELINE_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hyobscure/dataset.hpp"
#include "hyobscure/genboost.hpp"
#include "hyobscure/infotheory.hpp"
#include "hyobscure/initgen.hpp"
#include "hyobscure/obfopt.hpp"

namespace hyobscure {

struct PipelineConfig {
  GenConstraints gen_constraints;
  std::size_t n_clusters = 10;
  double budget = 0.0;
  double delta = 0.0001;
  std::uint64_t seed = 0;
  DistanceMetric metric = DistanceMetric::kEuclidean;
  std::size_t max_cross_iters = 200;
  SolverOptions solver;

  void validate() const {
    if (delta <= 0.0) throw std::invalid_argument("delta must be > 0");
    if (budget < 0.0) throw std::invalid_argument("budget must be >= 0");
  }
};

struct IterationPoint {
  double leakage_bits = 0.0;
  double utility_loss = 0.0;
};

struct ObscureReport {
  std::vector<IterationPoint> iteration_trace;  // [0] is the initial O-solve
  double initial_leakage_bits = 0.0;            // I0
  double final_leakage_bits = 0.0;
  double final_utility_loss = 0.0;
  std::size_t iterations = 0;  // cross iterations after the initial solve
  std::size_t theorem2_iters_bound = 0;  // ceil(I0 / delta)
  double theorem3_rhs_bits = 0.0;
  bool constraints_ok = false;
  bool solver_warning = false;
  double delta = 0.0;
  std::uint64_t seed = 0;
};

struct PublishedRecord {
  std::string user_id;
  std::vector<double> features;  // donor's original feature vector
  std::size_t group_index = 0;
  std::string group_label;
};

struct PublishedDataset {
  std::vector<PublishedRecord> records;
  std::vector<std::string> feature_names;
  std::vector<std::size_t> donor_of;  // provenance: donor user index
  std::size_t fallback_events = 0;    // empty donor pool resamples exhausted
};

struct PipelineResult {
  ObfuscationMatrix obf;
  GeneralizationFn gen;
  ClusterModel clusters;
  ObscureReport report;
};

inline PipelineResult run_pipeline(const Dataset& ds,
                                   const PipelineConfig& cfg) {
  cfg.validate();
  ds.validate();
  const auto feas = feasibility_check(ds, cfg.gen_constraints);
  if (!feas.ok) throw InfeasibleError(feas.reason);

  PipelineResult res;
  res.clusters = cluster_users(ds, cfg.n_clusters, cfg.seed);
  const DistanceTable dist = distance_table(res.clusters.centroids, cfg.metric);
  res.gen = init_generalization(ds, cfg.gen_constraints, cfg.seed + 1);

  Rng boost_rng(cfg.seed + 2);
  auto& report = res.report;
  report.delta = cfg.delta;
  report.seed = cfg.seed;

  auto gj = build_grouped_joint(ds, res.gen, res.clusters.assignment,
                                cfg.n_clusters);
  res.obf = solve_obfuscation(gj, dist, cfg.budget, cfg.solver);
  report.solver_warning = res.obf.solver_warning;
  double leak = leakage(gj, res.obf);
  report.iteration_trace.push_back({leak, utility_loss(gj, res.obf, dist)});
  report.initial_leakage_bits = leak;
  report.theorem2_iters_bound =
      static_cast<std::size_t>(std::ceil(std::max(leak, 0.0) / cfg.delta));

  double improvement = std::numeric_limits<double>::infinity();
  while (report.iterations < cfg.max_cross_iters &&
         report.iterations < report.theorem2_iters_bound && leak > 1e-15 &&
         improvement >= cfg.delta) {
    // G-step: boundary boosting with the obfuscation held fixed.
    BoostOptions bopts;
    bopts.delta = cfg.delta;
    const auto boosted = boost(res.gen, res.obf, ds, res.clusters.assignment,
                               dist, cfg.gen_constraints, boost_rng, bopts);
    res.gen = boosted.gen;
    gj = build_grouped_joint(ds, res.gen, res.clusters.assignment,
                             cfg.n_clusters);
    // O-step: warm-started re-solve; the incumbent stays feasible because
    // boosting only accepts candidates that lower the realized utility.
    res.obf = solve_obfuscation(gj, dist, cfg.budget, cfg.solver, &res.obf);
    report.solver_warning = report.solver_warning || res.obf.solver_warning;
    const double next = leakage(gj, res.obf);
    report.iteration_trace.push_back({next, utility_loss(gj, res.obf, dist)});
    improvement = leak - next;
    leak = next;
    ++report.iterations;
  }

  report.final_leakage_bits = clamp_bits(leak);
  report.final_utility_loss = report.iteration_trace.back().utility_loss;
  report.constraints_ok =
      satisfies_constraints(res.gen, value_user_counts(ds),
                            cfg.gen_constraints);

  // Obfuscation-only optimum (single all-encompassing group) for the
  // leakage bound: final <= I(C^;Y | O*) + log2(|C| * |Y~|).
  GeneralizationFn global;
  global.groups.push_back({0, ds.domain_size()});
  global.centers.push_back(0.0);
  const auto gj_global = build_grouped_joint(ds, global,
                                             res.clusters.assignment,
                                             cfg.n_clusters);
  const auto obf_global =
      solve_obfuscation(gj_global, dist, cfg.budget, cfg.solver);
  report.theorem3_rhs_bits =
      leakage(gj_global, obf_global) +
      log2_safe(static_cast<double>(cfg.n_clusters * res.gen.group_count()));
  return res;
}

// Data obscuring: per user, publish the generalized label and the feature
// vector of a donor sampled via the obfuscated cluster, restricted to users
// sharing the same generalized value.
inline PublishedDataset publish(const Dataset& ds, const ObfuscationMatrix& obf,
                                const GeneralizationFn& gen,
                                const ClusterModel& clusters,
                                std::uint64_t seed) {
  gen.validate(ds.domain_size());
  obf.validate();
  const std::size_t n = ds.user_count();
  const std::size_t n_clusters = obf.n_clusters;

  // Donor pools: users per (cluster, group).
  std::vector<std::vector<std::vector<std::size_t>>> pool(
      n_clusters, std::vector<std::vector<std::size_t>>(gen.group_count()));
  std::vector<std::size_t> group_of_user(n);
  for (std::size_t u = 0; u < n; ++u) {
    const std::size_t g =
        gen.group_of_value(ds.value_index(ds.records[u].private_value));
    group_of_user[u] = g;
    pool[clusters.assignment[u]][g].push_back(u);
  }

  Rng rng(seed);
  PublishedDataset out;
  out.feature_names = ds.feature_names;
  out.records.reserve(n);
  out.donor_of.reserve(n);
  for (std::size_t u = 0; u < n; ++u) {
    const std::size_t g = group_of_user[u];
    const std::size_t c = clusters.assignment[u];
    std::size_t donor_cluster = c;
    bool found = false;
    for (std::size_t attempt = 0; attempt < n_clusters && !found; ++attempt) {
      // Sample C^ from row (c, g).
      const double roll = rng.next_double();
      double acc = 0.0;
      std::size_t ch = n_clusters - 1;
      for (std::size_t h = 0; h < n_clusters; ++h) {
        acc += obf.at(g, c, h);
        if (roll < acc) {
          ch = h;
          break;
        }
      }
      if (!pool[ch][g].empty()) {
        donor_cluster = ch;
        found = true;
      }
    }
    if (!found) {
      // Fall back to the user's own cluster, which always holds the user.
      donor_cluster = c;
      ++out.fallback_events;
    }
    const auto& candidates = pool[donor_cluster][g];
    const std::size_t donor = candidates[rng.uniform_index(candidates.size())];
    PublishedRecord rec;
    rec.user_id = ds.records[u].user_id;
    rec.features = ds.records[donor].features;
    rec.group_index = g;
    rec.group_label = gen.group_label(g, ds);
    out.records.push_back(std::move(rec));
    out.donor_of.push_back(donor);
  }
  return out;
}

struct TheoremFinding {
  std::string name;
  bool ok = true;
  std::string detail;
};

// Re-asserts trace monotonicity, the iteration bound, and the leakage
// bound from the recorded report values alone.
inline std::vector<TheoremFinding> verify_theorems(const ObscureReport& r) {
  std::vector<TheoremFinding> findings;
  {
    TheoremFinding f{"trace_monotone", true, ""};
    for (std::size_t i = 1; i < r.iteration_trace.size(); ++i) {
      if (r.iteration_trace[i].leakage_bits >
          r.iteration_trace[i - 1].leakage_bits + 1e-9) {
        f.ok = false;
        f.detail = "leakage increased at iteration " + std::to_string(i);
        break;
      }
    }
    findings.push_back(f);
  }
  {
    TheoremFinding f{"iteration_bound", true, ""};
    if (r.iterations > r.theorem2_iters_bound) {
      f.ok = false;
      f.detail = std::to_string(r.iterations) + " iterations exceed bound " +
                 std::to_string(r.theorem2_iters_bound);
    }
    findings.push_back(f);
  }
  {
    TheoremFinding f{"leakage_bound", true, ""};
    if (r.final_leakage_bits > r.theorem3_rhs_bits + 1e-9) {
      f.ok = false;
      f.detail = "final leakage exceeds the bound";
    }
    findings.push_back(f);
  }
  return findings;
}

inline bool all_pass(const std::vector<TheoremFinding>& findings) {
  for (const auto& f : findings) {
    if (!f.ok) return false;
  }
  return true;
}

}  // namespace hyobscure

#endif  // HYOBSCURE_PIPELINE_HPP
