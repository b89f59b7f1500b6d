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
// Constraint-aware K-means over the ordered private domain, solving for the
// initial generalization function. Groups are grown as contiguous value
// intervals; assignment fills groups below the (k, l) floors first, then
// groups below the (alpha, beta) caps, and raises K when both candidate
// sets are exhausted.
#ifndef HYOBSCURE_INITGEN_HPP
#define HYOBSCURE_INITGEN_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hyobscure/dataset.hpp"
#include "hyobscure/generalization.hpp"
#include "hyobscure/rng.hpp"

namespace hyobscure {

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FeasibilityResult {
  bool ok = true;
  std::string reason;
};

// Counting bounds: K*k <= |U| <= K*alpha and K*l <= |Y| <= K*beta.
inline FeasibilityResult feasibility_check(const Dataset& ds,
                                           const GenConstraints& cons) {
  const std::size_t n_users = ds.user_count();
  const std::size_t n_values = ds.domain_size();
  const std::size_t K = cons.group_count;
  auto fail = [](std::string why) {
    return FeasibilityResult{false, std::move(why)};
  };
  if (K < 1) return fail("group count must be >= 1");
  if (cons.k > cons.alpha) return fail("k exceeds alpha");
  if (cons.l > cons.beta) return fail("l exceeds beta");
  if (K * cons.k > n_users) {
    return fail("K*k = " + std::to_string(K * cons.k) + " exceeds |U| = " +
                std::to_string(n_users) + "; K must satisfy K <= |U|/k");
  }
  if (cons.alpha != SIZE_MAX && K * cons.alpha < n_users) {
    const std::size_t need = (n_users + cons.alpha - 1) / cons.alpha;
    return fail("K*alpha = " + std::to_string(K * cons.alpha) +
                " cannot cap |U| = " + std::to_string(n_users) +
                " users; required K >= " + std::to_string(need));
  }
  if (K * cons.l > n_values) {
    return fail("K*l = " + std::to_string(K * cons.l) +
                " exceeds distinct values |Y| = " + std::to_string(n_values));
  }
  if (cons.beta != SIZE_MAX && K * cons.beta < n_values) {
    const std::size_t need = (n_values + cons.beta - 1) / cons.beta;
    return fail("K*beta = " + std::to_string(K * cons.beta) +
                " cannot cap |Y| = " + std::to_string(n_values) +
                " distinct values; required K >= " + std::to_string(need));
  }
  return {};
}

namespace detail {

// Within-group objective: user-weighted squared distance to the group
// centroid, normalized by |U|.
inline double partition_objective(const std::vector<double>& values,
                                  const std::vector<std::size_t>& counts,
                                  const std::vector<std::size_t>& group_of,
                                  std::size_t n_groups) {
  std::vector<double> sum(n_groups, 0.0);
  std::vector<double> weight(n_groups, 0.0);
  for (std::size_t v = 0; v < values.size(); ++v) {
    sum[group_of[v]] += values[v] * static_cast<double>(counts[v]);
    weight[group_of[v]] += static_cast<double>(counts[v]);
  }
  double total_users = 0.0;
  for (double w : weight) total_users += w;
  double obj = 0.0;
  for (std::size_t v = 0; v < values.size(); ++v) {
    const std::size_t g = group_of[v];
    const double center = sum[g] / weight[g];
    const double d = values[v] - center;
    obj += static_cast<double>(counts[v]) * d * d;
  }
  return obj / total_users;
}

struct AssignState {
  // Per-group claimed run [lo, hi) over value indices; empty when lo == hi.
  std::vector<std::size_t> lo, hi;
  std::vector<std::size_t> users, nvalues;
  std::vector<bool> taken;
};

// One greedy assignment pass with fixed centers. Returns group-of-value on
// success, nullopt when a value cannot be placed under the caps.
inline std::optional<std::vector<std::size_t>> assign_pass(
    const std::vector<double>& values, const std::vector<std::size_t>& counts,
    const std::vector<double>& centers, const GenConstraints& cons) {
  const std::size_t K = centers.size();
  const std::size_t m = values.size();
  AssignState st;
  st.lo.assign(K, 0);
  st.hi.assign(K, 0);
  st.users.assign(K, 0);
  st.nvalues.assign(K, 0);
  st.taken.assign(m, false);

  auto claim = [&](std::size_t g, std::size_t v) {
    if (st.lo[g] == st.hi[g]) {
      st.lo[g] = v;
      st.hi[g] = v + 1;
    } else if (v + 1 == st.lo[g]) {
      st.lo[g] = v;
    } else {
      st.hi[g] = v + 1;
    }
    st.taken[v] = true;
    st.users[g] += counts[v];
    st.nvalues[g] += 1;
  };

  auto below_floor = [&](std::size_t g) {
    return st.users[g] < cons.k || st.nvalues[g] < cons.l;
  };
  auto below_cap = [&](std::size_t g, std::size_t v) {
    // Both caps checked symmetrically when adding value v.
    return st.users[g] + counts[v] <= cons.alpha &&
           st.nvalues[g] + 1 <= cons.beta;
  };

  // Values compatible with group g: any free value when g is empty,
  // otherwise the free value immediately adjacent to g's run.
  auto candidates_for = [&](std::size_t g, std::vector<std::size_t>& out) {
    out.clear();
    if (st.lo[g] == st.hi[g]) {
      for (std::size_t v = 0; v < m; ++v) {
        if (!st.taken[v]) out.push_back(v);
      }
      return;
    }
    if (st.lo[g] > 0 && !st.taken[st.lo[g] - 1]) out.push_back(st.lo[g] - 1);
    if (st.hi[g] < m && !st.taken[st.hi[g]]) out.push_back(st.hi[g]);
  };

  std::size_t remaining = m;
  std::vector<std::size_t> cand;
  while (remaining > 0) {
    // d_min over the prioritized candidate set; ties broken by lower value,
    // then lower group index.
    bool found = false;
    std::size_t best_g = 0, best_v = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int phase = 0; phase < 2 && !found; ++phase) {
      for (std::size_t g = 0; g < K; ++g) {
        const bool in_set = phase == 0 ? below_floor(g) : true;
        if (!in_set) continue;
        candidates_for(g, cand);
        for (std::size_t v : cand) {
          if (!below_cap(g, v)) continue;
          const double d = std::abs(values[v] - centers[g]);
          if (d < best_d ||
              (d == best_d && (values[v] < values[best_v] ||
                               (v == best_v && g < best_g)))) {
            best_d = d;
            best_g = g;
            best_v = v;
            found = true;
          }
        }
      }
      if (found) break;
    }
    if (!found) return std::nullopt;  // dead end: caller raises K
    claim(best_g, best_v);
    --remaining;
  }

  // Floors may still be violated when a group got boxed in.
  for (std::size_t g = 0; g < K; ++g) {
    if (below_floor(g)) return std::nullopt;
  }
  std::vector<std::size_t> group_of(m);
  for (std::size_t g = 0; g < K; ++g) {
    for (std::size_t v = st.lo[g]; v < st.hi[g]; ++v) group_of[v] = g;
  }
  return group_of;
}

inline GeneralizationFn partition_from_assignment(
    const std::vector<double>& values, const std::vector<std::size_t>& counts,
    const std::vector<std::size_t>& group_of, std::size_t K) {
  // Groups are contiguous runs; re-number them left to right.
  GeneralizationFn gen;
  std::size_t v = 0;
  while (v < values.size()) {
    const std::size_t g = group_of[v];
    ValueInterval iv{v, v};
    double sum = 0.0, w = 0.0;
    while (v < values.size() && group_of[v] == g) {
      sum += values[v] * static_cast<double>(counts[v]);
      w += static_cast<double>(counts[v]);
      ++v;
    }
    iv.end = v;
    gen.groups.push_back(iv);
    gen.centers.push_back(sum / w);
  }
  if (gen.groups.size() != K) {
    throw std::logic_error("assignment did not form K contiguous runs");
  }
  return gen;
}

// Coordinate descent on the cut positions: shift each boundary by one value
// while the objective drops and the constraints hold.
inline void refine_boundaries(const std::vector<double>& values,
                              const std::vector<std::size_t>& counts,
                              const GenConstraints& cons,
                              GeneralizationFn& gen, double& obj) {
  const std::size_t m = values.size();
  const std::size_t K = gen.group_count();
  if (K < 2) return;
  auto objective_of = [&](const GeneralizationFn& g) {
    std::vector<std::size_t> group_of(m);
    for (std::size_t gi = 0; gi < g.group_count(); ++gi) {
      for (std::size_t v = g.groups[gi].begin; v < g.groups[gi].end; ++v) {
        group_of[v] = gi;
      }
    }
    return partition_objective(values, counts, group_of, K);
  };
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t b = 0; b + 1 < K; ++b) {
      for (int dir : {-1, 1}) {
        GeneralizationFn cand = gen;
        auto& lo = cand.groups[b];
        auto& hi = cand.groups[b + 1];
        if (dir > 0) {
          if (hi.size() < 2) continue;
          ++lo.end;
          ++hi.begin;
        } else {
          if (lo.size() < 2) continue;
          --lo.end;
          --hi.begin;
        }
        if (!satisfies_constraints(cand, counts, cons)) continue;
        const double cand_obj = objective_of(cand);
        if (cand_obj < obj - 1e-15) {
          gen = std::move(cand);
          obj = cand_obj;
          improved = true;
        }
      }
    }
  }
  // Re-identify the centers after boundary moves.
  for (std::size_t g = 0; g < K; ++g) {
    double sum = 0.0, w = 0.0;
    for (std::size_t v = gen.groups[g].begin; v < gen.groups[g].end; ++v) {
      sum += values[v] * static_cast<double>(counts[v]);
      w += static_cast<double>(counts[v]);
    }
    gen.centers[g] = sum / w;
  }
}

}  // namespace detail

struct InitGenOptions {
  std::size_t max_outer_iters = 100;
  std::size_t restarts_per_k = 20;  // re-seeded center draws before K+1
};

// Algorithm: seeded center sampling, greedy floor-first assignment with
// contiguity, center re-identification, until the assignment repeats or the
// objective stops improving. Deterministic given the seed.
inline GeneralizationFn init_generalization(const Dataset& ds,
                                            const GenConstraints& cons,
                                            std::uint64_t seed,
                                            const InitGenOptions& opts = {}) {
  const auto feas = feasibility_check(ds, cons);
  if (!feas.ok) throw InfeasibleError(feas.reason);

  const auto counts = value_user_counts(ds);
  const auto& values = ds.private_domain;
  const std::size_t m = values.size();
  const std::size_t k_cap =
      cons.k > 0 ? ds.user_count() / cons.k : ds.user_count();

  Rng rng(seed);
  for (std::size_t K = cons.group_count; K <= k_cap; ++K) {
    GenConstraints local = cons;
    local.group_count = K;
    if (!feasibility_check(ds, local).ok) break;
    if (K > m) break;

    GeneralizationFn best_gen;
    double best_over = std::numeric_limits<double>::infinity();
    for (std::size_t restart = 0; restart < opts.restarts_per_k; ++restart) {
      std::vector<double> centers(K);
      auto picks = rng.sample_without_replacement(m, K);
      std::sort(picks.begin(), picks.end());
      for (std::size_t g = 0; g < K; ++g) centers[g] = values[picks[g]];

      std::optional<std::vector<std::size_t>> best;
      double best_obj = std::numeric_limits<double>::infinity();
      for (std::size_t iter = 0; iter < opts.max_outer_iters; ++iter) {
        auto assignment = detail::assign_pass(values, counts, centers, cons);
        if (!assignment) break;
        const double obj =
            detail::partition_objective(values, counts, *assignment, K);
        if (best && *assignment == *best) break;  // fixed point
        if (obj >= best_obj) break;  // keep the best-so-far, non-increasing
        best = assignment;
        best_obj = obj;
        // Re-identify centers as user-weighted group means.
        std::vector<double> sum(K, 0.0), w(K, 0.0);
        for (std::size_t v = 0; v < m; ++v) {
          sum[(*assignment)[v]] += values[v] * static_cast<double>(counts[v]);
          w[(*assignment)[v]] += static_cast<double>(counts[v]);
        }
        for (std::size_t g = 0; g < K; ++g) centers[g] = sum[g] / w[g];
        std::sort(centers.begin(), centers.end());
      }
      if (best) {
        auto gen = detail::partition_from_assignment(values, counts, *best, K);
        gen.validate(m);
        if (!satisfies_constraints(gen, counts, cons)) continue;
        if (best_obj < best_over) {
          best_over = best_obj;
          best_gen = gen;
        }
      }
    }
    if (!best_gen.groups.empty()) {
      detail::refine_boundaries(values, counts, cons, best_gen, best_over);
      return best_gen;
    }
    // Both candidate sets exhausted at this K: raise K and restart.
  }
  throw InfeasibleError(
      "no feasible generalization found up to K = floor(|U|/k)");
}

}  // namespace hyobscure

#endif  // HYOBSCURE_INITGEN_HPP
