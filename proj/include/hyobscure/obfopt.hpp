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
// Generalization-aware obfuscation: clusters users by their
// privacy-insensitive features, then minimizes the leakage functional over
// row-stochastic per-group blocks under the expected-distance budget.
//
// Solver: Frank-Wolfe (projection-free). The feasible set is a product of
// row simplices intersected with one linear budget inequality; the linear
// minimization subproblem is solved exactly by a one-dimensional dual
// search on the budget multiplier. Termination is certified by the duality
// gap.
#ifndef HYOBSCURE_OBFOPT_HPP
#define HYOBSCURE_OBFOPT_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hyobscure/dataset.hpp"
#include "hyobscure/infotheory.hpp"
#include "hyobscure/obfuscation.hpp"
#include "hyobscure/rng.hpp"

namespace hyobscure {

struct KMeansOptions {
  std::size_t max_iters = 100;
};

// Seeded Lloyd K-means over feature vectors. Empty clusters are repaired by
// splitting the largest cluster at its farthest member.
inline ClusterModel cluster_users(const Dataset& ds, std::size_t n_clusters,
                                  std::uint64_t seed,
                                  const KMeansOptions& opts = {}) {
  const std::size_t n = ds.user_count();
  if (n_clusters < 1 || n_clusters > n) {
    throw std::invalid_argument("n_clusters out of range");
  }
  Rng rng(seed);
  ClusterModel model;
  model.centroids.resize(n_clusters);
  model.assignment.assign(n, 0);

  auto sq_dist = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      s += d * d;
    }
    return s;
  };

  // Farthest-point seeding: random first pick, then maxmin picks. Spreads
  // the seeds across separated modes instead of relying on luck.
  {
    model.centroids[0] = ds.records[rng.uniform_index(n)].features;
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    for (std::size_t c = 1; c < n_clusters; ++c) {
      std::size_t far_user = 0;
      double far_d = -1.0;
      for (std::size_t u = 0; u < n; ++u) {
        nearest[u] = std::min(
            nearest[u], sq_dist(ds.records[u].features, model.centroids[c - 1]));
        if (nearest[u] > far_d) {
          far_d = nearest[u];
          far_user = u;
        }
      }
      model.centroids[c] = ds.records[far_user].features;
    }
  }

  for (std::size_t iter = 0; iter < opts.max_iters; ++iter) {
    bool changed = false;
    for (std::size_t u = 0; u < n; ++u) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < n_clusters; ++c) {
        const double d = sq_dist(ds.records[u].features, model.centroids[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (model.assignment[u] != best) {
        model.assignment[u] = best;
        changed = true;
      }
    }
    // Repair empty clusters from the largest one.
    std::vector<std::size_t> sizes(n_clusters, 0);
    for (std::size_t u = 0; u < n; ++u) ++sizes[model.assignment[u]];
    for (std::size_t c = 0; c < n_clusters; ++c) {
      if (sizes[c] > 0) continue;
      const std::size_t big = static_cast<std::size_t>(
          std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
      std::size_t far_user = 0;
      double far_d = -1.0;
      for (std::size_t u = 0; u < n; ++u) {
        if (model.assignment[u] != big) continue;
        const double d = sq_dist(ds.records[u].features, model.centroids[big]);
        if (d > far_d) {
          far_d = d;
          far_user = u;
        }
      }
      model.assignment[far_user] = c;
      --sizes[big];
      ++sizes[c];
      changed = true;
    }
    // Means.
    for (std::size_t c = 0; c < n_clusters; ++c) {
      model.centroids[c].assign(ds.feature_dim, 0.0);
    }
    std::vector<double> weight(n_clusters, 0.0);
    for (std::size_t u = 0; u < n; ++u) {
      const std::size_t c = model.assignment[u];
      weight[c] += 1.0;
      for (std::size_t f = 0; f < ds.feature_dim; ++f) {
        model.centroids[c][f] += ds.records[u].features[f];
      }
    }
    for (std::size_t c = 0; c < n_clusters; ++c) {
      for (std::size_t f = 0; f < ds.feature_dim; ++f) {
        model.centroids[c][f] /= weight[c];
      }
    }
    if (!changed) break;
  }
  return model;
}

struct SolverOptions {
  double tol = 1e-6;            // duality-gap certificate
  std::size_t max_iters = 10000;
  // Break early when the objective stalls at machine precision.
  double stagnation_eps = 1e-14;
  std::size_t stagnation_window = 100;
};

namespace detail {

// Linear minimization over {row-stochastic blocks} n {sum w.s <= budget}.
// For a multiplier lam >= 0 each row independently picks
// argmin_j grad_j + lam * w_j; a bisection on lam finds the smallest
// multiplier whose vertex meets the budget, and two neighboring vertices
// are blended to make the budget exactly tight.
struct Lmo {
  const std::vector<std::vector<double>>& grad;
  const std::vector<std::vector<double>>& cost;  // w entries
  std::size_t n;

  void vertex(double lam, std::vector<std::vector<double>>& s,
              double* total_cost) const {
    *total_cost = 0.0;
    for (std::size_t g = 0; g < grad.size(); ++g) {
      s[g].assign(n * n, 0.0);
      for (std::size_t c = 0; c < n; ++c) {
        std::size_t best = 0;
        double best_v = std::numeric_limits<double>::infinity();
        double best_w = std::numeric_limits<double>::infinity();
        for (std::size_t h = 0; h < n; ++h) {
          const double w = cost[g][c * n + h];
          const double v = grad[g][c * n + h] + lam * w;
          // Ties resolved toward the cheaper budget use.
          if (v < best_v - 1e-15 ||
              (v < best_v + 1e-15 && w < best_w)) {
            best_v = v;
            best_w = w;
            best = h;
          }
        }
        s[g][c * n + best] = 1.0;
        *total_cost += best_w;
      }
    }
  }

  void solve(double budget, double grad_scale,
             std::vector<std::vector<double>>& s) const {
    double c0;
    vertex(0.0, s, &c0);
    if (c0 <= budget) return;
    // Every row has a zero-cost diagonal entry, so large lam always fits.
    double lo = 0.0, hi = 1.0;
    std::vector<std::vector<double>> s_hi(grad.size());
    double c_hi;
    for (int i = 0; i < 200; ++i) {
      vertex(hi, s_hi, &c_hi);
      if (c_hi <= budget) break;
      hi *= 2.0;
      if (hi > 1e30 * (grad_scale + 1.0)) break;
    }
    for (int i = 0; i < 120; ++i) {
      const double mid = 0.5 * (lo + hi);
      double cm;
      vertex(mid, s_hi, &cm);
      if (cm <= budget) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    std::vector<std::vector<double>> s_lo(grad.size());
    double c_lo;
    vertex(lo, s_lo, &c_lo);
    vertex(hi, s_hi, &c_hi);
    if (c_lo <= budget) {
      s = s_lo;
      return;
    }
    if (c_lo <= c_hi) {  // degenerate bracket
      s = s_hi;
      return;
    }
    // Convex blend making the budget exactly tight; both vertices are
    // optimal for the critical multiplier, so the blend solves the LP.
    const double theta = (c_lo - budget) / (c_lo - c_hi);
    for (std::size_t g = 0; g < grad.size(); ++g) {
      s[g].resize(n * n);
      for (std::size_t i = 0; i < n * n; ++i) {
        s[g][i] = (1.0 - theta) * s_lo[g][i] + theta * s_hi[g][i];
      }
    }
  }
};

// Objective along the segment x + t (s - x); both q and r are affine in t.
struct LineObjective {
  // Per group: q_x, q_delta (|C| x m), weights.
  std::vector<std::vector<double>> qx, qd;
  std::vector<double> weight;
  std::vector<std::size_t> msize;
  std::size_t n;

  double eval(double t) const {
    double acc = 0.0;
    for (std::size_t g = 0; g < weight.size(); ++g) {
      if (weight[g] <= 0.0) continue;
      const std::size_t m = msize[g];
      double inner = 0.0;
      for (std::size_t ch = 0; ch < n; ++ch) {
        double r = 0.0;
        for (std::size_t y = 0; y < m; ++y) {
          r += qx[g][ch * m + y] + t * qd[g][ch * m + y];
        }
        for (std::size_t y = 0; y < m; ++y) {
          const double q = qx[g][ch * m + y] + t * qd[g][ch * m + y];
          if (q > 0.0) inner += q * std::log2(q / r);
        }
      }
      acc += weight[g] * inner;
    }
    return acc;
  }
};

}  // namespace detail

// Minimizes the leakage functional over feasible obfuscation matrices.
// Returns a matrix with the certified duality gap; `solver_warning` is set
// when the gap certificate was not reached within max_iters.
inline ObfuscationMatrix solve_obfuscation(const GroupedJoint& gj,
                                           const DistanceTable& dist,
                                           double budget,
                                           const SolverOptions& opts = {},
                                           const ObfuscationMatrix* warm_start
                                           = nullptr) {
  if (budget < 0.0) throw std::invalid_argument("budget must be >= 0");
  dist.validate();
  const std::size_t n = gj.n_clusters;
  const std::size_t n_groups = gj.group_count();

  ObfuscationMatrix x = warm_start ? *warm_start
                                   : ObfuscationMatrix::identity(n, n_groups);
  x.budget = budget;

  const auto mass = gj.cluster_mass();
  // Budget coefficients w(g,c,c^) = p(y~)p(c|y~) d(c,c^).
  std::vector<std::vector<double>> cost(n_groups,
                                        std::vector<double>(n * n, 0.0));
  for (std::size_t g = 0; g < n_groups; ++g) {
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t h = 0; h < n; ++h) {
        cost[g][c * n + h] = mass[g][c] * dist.at(c, h);
      }
    }
  }

  // Zero-mass groups keep identity blocks and are excluded from the
  // decision variables by their zero gradient and zero cost.
  std::vector<std::vector<double>> s(n_groups);
  double prev_obj = leakage(gj, x);
  double stagnant_since = prev_obj;
  std::size_t stagnant = 0;
  bool certified = false;
  double gap = std::numeric_limits<double>::infinity();

  for (std::size_t iter = 0; iter < opts.max_iters; ++iter) {
    const auto grad = leakage_gradient_core(gj, x);
    double gscale = 0.0;
    for (const auto& gb : grad)
      for (double v : gb) gscale = std::max(gscale, std::abs(v));
    detail::Lmo lmo{grad, cost, n};
    lmo.solve(budget, gscale, s);
    // Zero-mass groups are not decision variables; freeze their blocks.
    for (std::size_t g = 0; g < n_groups; ++g) {
      if (gj.group_weight[g] <= 0.0) s[g] = x.blocks[g];
    }

    gap = 0.0;
    for (std::size_t g = 0; g < n_groups; ++g) {
      for (std::size_t i = 0; i < n * n; ++i) {
        gap += grad[g][i] * (x.blocks[g][i] - s[g][i]);
      }
    }
    if (gap <= opts.tol) {
      certified = true;
      break;
    }

    // Exact line search on the convex segment objective.
    detail::LineObjective lo;
    lo.n = n;
    lo.weight = gj.group_weight;
    lo.msize = gj.group_size;
    lo.qx.resize(n_groups);
    lo.qd.resize(n_groups);
    for (std::size_t g = 0; g < n_groups; ++g) {
      const std::size_t m = gj.group_size[g];
      lo.qx[g].assign(n * m, 0.0);
      lo.qd[g].assign(n * m, 0.0);
      if (gj.group_weight[g] <= 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t h = 0; h < n; ++h) {
          const double ox = x.blocks[g][c * n + h];
          const double od = s[g][c * n + h] - ox;
          if (ox == 0.0 && od == 0.0) continue;
          for (std::size_t y = 0; y < m; ++y) {
            const double p = gj.cond[g][c * m + y];
            lo.qx[g][h * m + y] += ox * p;
            lo.qd[g][h * m + y] += od * p;
          }
        }
      }
    }
    double a = 0.0, b = 1.0;
    for (int i = 0; i < 100; ++i) {
      const double m1 = a + (b - a) / 3.0;
      const double m2 = b - (b - a) / 3.0;
      if (lo.eval(m1) <= lo.eval(m2)) {
        b = m2;
      } else {
        a = m1;
      }
    }
    double step = 0.5 * (a + b);
    if (lo.eval(step) > lo.eval(0.0)) step = 0.0;  // never increase

    for (std::size_t g = 0; g < n_groups; ++g) {
      for (std::size_t i = 0; i < n * n; ++i) {
        x.blocks[g][i] += step * (s[g][i] - x.blocks[g][i]);
        if (x.blocks[g][i] < 0.0) x.blocks[g][i] = 0.0;
      }
    }
    const double obj = leakage(gj, x);
    if (stagnant_since - obj < opts.stagnation_eps) {
      if (++stagnant >= opts.stagnation_window) break;
    } else {
      stagnant = 0;
      stagnant_since = obj;
    }
    prev_obj = obj;
  }
  (void)prev_obj;
  x.solver_warning = !certified;
  x.achieved_gap = gap;
  return x;
}

inline ObfuscationMatrix solve_obfuscation(
    const Dataset& ds, const GeneralizationFn& gen, const ClusterModel& clusters,
    const DistanceTable& dist, double budget, const SolverOptions& opts = {},
    const ObfuscationMatrix* warm_start = nullptr) {
  const auto gj = build_grouped_joint(ds, gen, clusters.assignment,
                                      clusters.cluster_count());
  return solve_obfuscation(gj, dist, budget, opts, warm_start);
}

// First-order oracle for the leakage objective, exposed for verification
// against finite differences.
inline std::vector<std::vector<double>> leakage_gradient(
    const ObfuscationMatrix& obf, const GroupedJoint& gj) {
  return leakage_gradient_core(gj, obf);
}

}  // namespace hyobscure

#endif  // HYOBSCURE_OBFOPT_HPP
