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
// Comparison obfuscators. Each emits cluster-level row-stochastic blocks so
// the same publishing sampler and metrics apply uniformly; correlation with
// the generalized private data is deliberately ignored (the point of the
// comparison), the block structure only keeps publishing well-defined.
#ifndef HYOBSCURE_BASELINES_HPP
#define HYOBSCURE_BASELINES_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hyobscure/infotheory.hpp"
#include "hyobscure/obfopt.hpp"
#include "hyobscure/obfuscation.hpp"
#include "hyobscure/pipeline.hpp"

namespace hyobscure {

enum class BaselineKind { kRandom, kFrapp, kSimp, kDp, kPrivCheck, kXObf, kYGen };

namespace detail {

inline ObfuscationMatrix replicate_block(std::vector<double> block,
                                         std::size_t n_clusters,
                                         std::size_t n_groups) {
  ObfuscationMatrix m;
  m.n_clusters = n_clusters;
  m.blocks.assign(n_groups, block);
  return m;
}

}  // namespace detail

// Swap with probability p to a uniformly random other cluster.
inline ObfuscationMatrix random_obfuscation(std::size_t n_clusters, double p,
                                            std::size_t n_groups) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("p must be in [0,1]");
  std::vector<double> block(n_clusters * n_clusters, 0.0);
  const double off =
      n_clusters > 1 ? p / static_cast<double>(n_clusters - 1) : 0.0;
  for (std::size_t c = 0; c < n_clusters; ++c) {
    for (std::size_t h = 0; h < n_clusters; ++h) {
      block[c * n_clusters + h] = c == h ? (n_clusters > 1 ? 1.0 - p : 1.0)
                                         : off;
    }
  }
  return detail::replicate_block(std::move(block), n_clusters, n_groups);
}

// Gamma-diagonal stochastic matrix: users keep their own data with a
// gamma-fold higher ratio than moving to any other cluster.
inline ObfuscationMatrix frapp_obfuscation(std::size_t n_clusters, double gamma,
                                           std::size_t n_groups) {
  if (gamma < 1.0) throw std::invalid_argument("gamma must be >= 1");
  const double denom = gamma + static_cast<double>(n_clusters - 1);
  std::vector<double> block(n_clusters * n_clusters, 1.0 / denom);
  for (std::size_t c = 0; c < n_clusters; ++c) {
    block[c * n_clusters + c] = gamma / denom;
  }
  return detail::replicate_block(std::move(block), n_clusters, n_groups);
}

// Softmax over negative distance: similar clusters swap with larger
// probability.
inline ObfuscationMatrix simp_obfuscation(const DistanceTable& dist,
                                          double temperature,
                                          std::size_t n_groups) {
  if (temperature <= 0.0) {
    throw std::invalid_argument("temperature must be > 0");
  }
  const std::size_t n = dist.n;
  std::vector<double> block(n * n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    double z = 0.0;
    for (std::size_t h = 0; h < n; ++h) {
      block[c * n + h] = std::exp(-dist.at(c, h) / temperature);
      z += block[c * n + h];
    }
    for (std::size_t h = 0; h < n; ++h) block[c * n + h] /= z;
  }
  return detail::replicate_block(std::move(block), n, n_groups);
}

// Exponential mechanism over cluster distance: p(v|u) ~ exp(-beta d(u,v)).
// Satisfies the 2*beta*d_max differential-privacy row-ratio property.
inline ObfuscationMatrix dp_obfuscation(const DistanceTable& dist,
                                        double beta_dp, std::size_t n_groups) {
  if (beta_dp < 0.0) throw std::invalid_argument("beta must be >= 0");
  const std::size_t n = dist.n;
  std::vector<double> block(n * n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    double z = 0.0;
    for (std::size_t h = 0; h < n; ++h) {
      block[c * n + h] = std::exp(-beta_dp * dist.at(c, h));
      z += block[c * n + h];
    }
    for (std::size_t h = 0; h < n; ++h) block[c * n + h] /= z;
  }
  return detail::replicate_block(std::move(block), n, n_groups);
}

// Leakage-optimal obfuscation ignoring the generalization correlation:
// the constrained solve with a single all-encompassing group, replicated
// into every block.
inline ObfuscationMatrix privcheck_obfuscation(const Dataset& ds,
                                               const ClusterModel& clusters,
                                               const DistanceTable& dist,
                                               double budget,
                                               std::size_t n_groups,
                                               const SolverOptions& opts = {}) {
  GeneralizationFn global;
  global.groups.push_back({0, ds.domain_size()});
  global.centers.push_back(0.0);
  const auto gj = build_grouped_joint(ds, global, clusters.assignment,
                                      clusters.cluster_count());
  auto solved = solve_obfuscation(gj, dist, budget, opts);
  auto out = detail::replicate_block(solved.blocks[0],
                                     clusters.cluster_count(), n_groups);
  out.budget = budget;
  out.solver_warning = solved.solver_warning;
  out.achieved_gap = solved.achieved_gap;
  return out;
}

struct AblationResult {
  ObfuscationMatrix obf;
  GeneralizationFn gen;
  ClusterModel clusters;
};

// One generalization-aware obfuscation pass on the initial partition, no
// boundary boosting and no cross iteration.
inline AblationResult ablation_xobf(const Dataset& ds,
                                    const PipelineConfig& cfg) {
  cfg.validate();
  const auto feas = feasibility_check(ds, cfg.gen_constraints);
  if (!feas.ok) throw InfeasibleError(feas.reason);
  AblationResult res;
  res.clusters = cluster_users(ds, cfg.n_clusters, cfg.seed);
  const auto dist = distance_table(res.clusters.centroids, cfg.metric);
  res.gen = init_generalization(ds, cfg.gen_constraints, cfg.seed + 1);
  const auto gj = build_grouped_joint(ds, res.gen, res.clusters.assignment,
                                      cfg.n_clusters);
  res.obf = solve_obfuscation(gj, dist, cfg.budget, cfg.solver);
  return res;
}

// One boosting pass over the initial partition with the correlation-blind
// optimal obfuscation held fixed.
inline AblationResult ablation_ygen(const Dataset& ds,
                                    const PipelineConfig& cfg) {
  cfg.validate();
  const auto feas = feasibility_check(ds, cfg.gen_constraints);
  if (!feas.ok) throw InfeasibleError(feas.reason);
  AblationResult res;
  res.clusters = cluster_users(ds, cfg.n_clusters, cfg.seed);
  const auto dist = distance_table(res.clusters.centroids, cfg.metric);
  res.gen = init_generalization(ds, cfg.gen_constraints, cfg.seed + 1);
  res.obf = privcheck_obfuscation(ds, res.clusters, dist, cfg.budget,
                                  res.gen.group_count(), cfg.solver);
  Rng rng(cfg.seed + 2);
  BoostOptions bopts;
  bopts.delta = cfg.delta;
  res.gen = boost(res.gen, res.obf, ds, res.clusters.assignment, dist,
                  cfg.gen_constraints, rng, bopts)
                .gen;
  return res;
}

// Calibrates a single-parameter baseline so its realized utility loss hits
// the budget (monotone bisection on the parameter).
template <typename MatrixOfParam>
inline ObfuscationMatrix calibrate_to_budget(
    MatrixOfParam&& make, double lo, double hi, bool loss_increasing,
    const std::vector<std::vector<double>>& cluster_mass,
    const DistanceTable& dist, double budget) {
  auto loss_at = [&](double t) {
    return utility_loss(make(t), dist, cluster_mass);
  };
  // The budget may exceed the achievable range; clamp to the extreme.
  const double extreme = loss_increasing ? hi : lo;
  if (loss_at(extreme) <= budget) return make(extreme);
  double a = lo, b = hi;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (a + b);
    const bool under = loss_at(mid) <= budget;
    if (under == loss_increasing) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return make(loss_increasing ? a : b);
}

}  // namespace hyobscure

#endif  // HYOBSCURE_BASELINES_HPP
