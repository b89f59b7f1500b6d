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
// Information-theoretic metrics over discrete plug-in distributions.
// All logarithms are base 2; leakage is reported in bits. The convention
// 0*log(0) = 0 applies throughout.
#ifndef HYOBSCURE_INFOTHEORY_HPP
#define HYOBSCURE_INFOTHEORY_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "hyobscure/dataset.hpp"
#include "hyobscure/generalization.hpp"
#include "hyobscure/obfuscation.hpp"

namespace hyobscure {

inline double log2_safe(double x) { return std::log2(x); }

// Negative round-off is clamped at reporting; raw values stay internal.
inline double clamp_bits(double bits) {
  if (bits < 0.0 && bits > -1e-12) return 0.0;
  return bits;
}

struct Distribution {
  std::vector<double> probabilities;

  void validate() const {
    double sum = 0.0;
    for (double v : probabilities) {
      if (v < 0.0) throw std::invalid_argument("negative probability");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw std::invalid_argument("probabilities do not sum to 1");
    }
  }
};

inline double entropy(const Distribution& dist) {
  dist.validate();
  double h = 0.0;
  for (double v : dist.probabilities) {
    if (v > 0.0) h -= v * log2_safe(v);
  }
  return h;
}

inline double mutual_information(const EmpiricalJoint& joint) {
  joint.validate();
  const auto pr = joint.row_marginal();
  const auto pc = joint.col_marginal();
  double mi = 0.0;
  for (std::size_t r = 0; r < joint.rows; ++r) {
    for (std::size_t c = 0; c < joint.cols; ++c) {
      const double pj = joint.at(r, c);
      if (pj > 0.0) mi += pj * log2_safe(pj / (pr[r] * pc[c]));
    }
  }
  return mi;
}

// Fano lower bound on the error probability of any inference algorithm.
inline double fano_bound(double h_y_bits, double leakage_bits,
                         std::size_t domain_size) {
  if (domain_size < 2) throw std::invalid_argument("domain size must be >= 2");
  const double b = (h_y_bits - leakage_bits - 1.0) /
                   log2_safe(static_cast<double>(domain_size));
  return b > 0.0 ? b : 0.0;
}

enum class DistanceMetric { kEuclidean, kJsDivergence };

inline double cluster_distance(const std::vector<double>& a,
                               const std::vector<double>& b,
                               DistanceMetric metric) {
  if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
  if (metric == DistanceMetric::kEuclidean) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      s += d * d;
    }
    return std::sqrt(s);
  }
  // Jensen-Shannon divergence in bits; inputs must be distributions.
  double sa = 0.0, sb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0.0 || b[i] < 0.0) {
      throw std::invalid_argument("JS divergence needs non-negative entries");
    }
    sa += a[i];
    sb += b[i];
  }
  if (std::abs(sa - 1.0) > 1e-9 || std::abs(sb - 1.0) > 1e-9) {
    throw std::invalid_argument("JS divergence needs normalized vectors");
  }
  double js = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double m = 0.5 * (a[i] + b[i]);
    if (a[i] > 0.0) js += 0.5 * a[i] * log2_safe(a[i] / m);
    if (b[i] > 0.0) js += 0.5 * b[i] * log2_safe(b[i] / m);
  }
  return js;
}

inline DistanceTable distance_table(const std::vector<std::vector<double>>& centroids,
                                    DistanceMetric metric) {
  DistanceTable t;
  t.n = centroids.size();
  t.d.assign(t.n * t.n, 0.0);
  for (std::size_t a = 0; a < t.n; ++a) {
    for (std::size_t b = a + 1; b < t.n; ++b) {
      const double v = cluster_distance(centroids[a], centroids[b], metric);
      t.d[a * t.n + b] = v;
      t.d[b * t.n + a] = v;
    }
  }
  return t;
}

// Per-group empirical model: group weights p(y~), conditional joints
// p(c, y | y~), and the private marginal. This is the sufficient statistic
// for both the leakage functional and the utility loss.
struct GroupedJoint {
  std::size_t n_clusters = 0;
  std::vector<double> p_y;           // over the full private domain
  std::vector<double> group_weight;  // p(y~)
  // cond[g] is |C| x m_g row-major: p(c, y | y~) for y inside group g.
  std::vector<std::vector<double>> cond;
  std::vector<std::size_t> group_size;  // m_g

  std::size_t group_count() const { return group_weight.size(); }

  double h_y() const {
    double h = 0.0;
    for (double v : p_y) {
      if (v > 0.0) h -= v * log2_safe(v);
    }
    return h;
  }

  // Cluster mass per group: p(y~) * p(c | y~), summing to 1 overall.
  std::vector<std::vector<double>> cluster_mass() const {
    std::vector<std::vector<double>> mass(group_count());
    for (std::size_t g = 0; g < group_count(); ++g) {
      mass[g].assign(n_clusters, 0.0);
      const std::size_t m = group_size[g];
      for (std::size_t c = 0; c < n_clusters; ++c) {
        double s = 0.0;
        for (std::size_t y = 0; y < m; ++y) s += cond[g][c * m + y];
        mass[g][c] = s * group_weight[g];
      }
    }
    return mass;
  }
};

inline GroupedJoint build_grouped_joint(const Dataset& ds,
                                        const GeneralizationFn& gen,
                                        const std::vector<std::size_t>& cluster_of,
                                        std::size_t n_clusters) {
  gen.validate(ds.domain_size());
  const EmpiricalJoint joint = empirical_joint(ds, cluster_of, n_clusters);
  GroupedJoint gj;
  gj.n_clusters = n_clusters;
  gj.p_y = joint.col_marginal();
  gj.group_weight.resize(gen.group_count());
  gj.cond.resize(gen.group_count());
  gj.group_size.resize(gen.group_count());
  for (std::size_t g = 0; g < gen.group_count(); ++g) {
    const auto& iv = gen.groups[g];
    const std::size_t m = iv.size();
    gj.group_size[g] = m;
    double w = 0.0;
    for (std::size_t v = iv.begin; v < iv.end; ++v) w += gj.p_y[v];
    gj.group_weight[g] = w;
    gj.cond[g].assign(n_clusters * m, 0.0);
    if (w <= 0.0) continue;
    for (std::size_t c = 0; c < n_clusters; ++c) {
      for (std::size_t v = iv.begin; v < iv.end; ++v) {
        gj.cond[g][c * m + (v - iv.begin)] = joint.at(c, v) / w;
      }
    }
  }
  return gj;
}

// Privacy leakage I(Y; C^, Y~) of publishing the obfuscated cluster and the
// generalized label. For each group: p(c^, y | y~) = sum_c O(c^|c, y~)
// p(c, y | y~), p(c^ | y~) by summing over y, then the grouped double sum
// plus H(Y).
inline double leakage(const GroupedJoint& gj, const ObfuscationMatrix& obf) {
  if (obf.group_count() != gj.group_count() ||
      obf.n_clusters != gj.n_clusters) {
    throw std::invalid_argument("obfuscation blocks do not match groups");
  }
  const std::size_t n = gj.n_clusters;
  double acc = 0.0;
  std::vector<double> q;  // p(c^, y | y~)
  std::vector<double> r;  // p(c^ | y~)
  for (std::size_t g = 0; g < gj.group_count(); ++g) {
    const double w = gj.group_weight[g];
    if (w <= 0.0) continue;
    const std::size_t m = gj.group_size[g];
    q.assign(n * m, 0.0);
    r.assign(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t ch = 0; ch < n; ++ch) {
        const double o = obf.at(g, c, ch);
        if (o == 0.0) continue;
        for (std::size_t y = 0; y < m; ++y) {
          q[ch * m + y] += o * gj.cond[g][c * m + y];
        }
      }
    }
    for (std::size_t ch = 0; ch < n; ++ch) {
      for (std::size_t y = 0; y < m; ++y) r[ch] += q[ch * m + y];
    }
    double inner = 0.0;
    for (std::size_t ch = 0; ch < n; ++ch) {
      for (std::size_t y = 0; y < m; ++y) {
        const double v = q[ch * m + y];
        if (v > 0.0) inner += v * log2_safe(v / r[ch]);
      }
    }
    acc += w * inner;
  }
  return acc + gj.h_y();
}

inline double leakage(const Dataset& ds, const GeneralizationFn& gen,
                      const ObfuscationMatrix& obf,
                      const std::vector<std::size_t>& cluster_of) {
  return leakage(build_grouped_joint(ds, gen, cluster_of, obf.n_clusters), obf);
}

// Partial derivatives of the leakage functional w.r.t. each block entry:
// dF/dO(c^|c, y~) = p(y~) sum_y p(c,y|y~) log2( q(c^,y) / r(c^) ).
// Ratios with vanishing numerator and denominator contribute zero, which
// keeps the gradient finite for zero-probability private values.
inline std::vector<std::vector<double>> leakage_gradient_core(
    const GroupedJoint& gj, const ObfuscationMatrix& obf) {
  const std::size_t n = gj.n_clusters;
  std::vector<std::vector<double>> grad(gj.group_count());
  std::vector<double> q, r;
  for (std::size_t g = 0; g < gj.group_count(); ++g) {
    grad[g].assign(n * n, 0.0);
    const double w = gj.group_weight[g];
    if (w <= 0.0) continue;
    const std::size_t m = gj.group_size[g];
    q.assign(n * m, 0.0);
    r.assign(n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t ch = 0; ch < n; ++ch) {
        const double o = obf.at(g, c, ch);
        if (o == 0.0) continue;
        for (std::size_t y = 0; y < m; ++y) {
          q[ch * m + y] += o * gj.cond[g][c * m + y];
        }
      }
    }
    for (std::size_t ch = 0; ch < n; ++ch) {
      for (std::size_t y = 0; y < m; ++y) r[ch] += q[ch * m + y];
    }
    constexpr double kTiny = 1e-300;
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t ch = 0; ch < n; ++ch) {
        double s = 0.0;
        for (std::size_t y = 0; y < m; ++y) {
          const double pcy = gj.cond[g][c * m + y];
          if (pcy == 0.0) continue;
          const double num = q[ch * m + y] > kTiny ? q[ch * m + y] : kTiny;
          const double den = r[ch] > kTiny ? r[ch] : kTiny;
          s += pcy * log2_safe(num / den);
        }
        grad[g][c * n + ch] = w * s;
      }
    }
  }
  return grad;
}

// Expected obfuscation distance E[d(C, C^)], group-weighted:
// sum_y~ p(y~) sum_{c,c^} p(c|y~) O(c^|c,y~) d(c,c^).
inline double utility_loss(const ObfuscationMatrix& obf,
                           const DistanceTable& dist,
                           const std::vector<std::vector<double>>& cluster_mass) {
  dist.validate();
  if (cluster_mass.size() != obf.group_count()) {
    throw std::invalid_argument("cluster mass does not match groups");
  }
  const std::size_t n = obf.n_clusters;
  double loss = 0.0;
  for (std::size_t g = 0; g < obf.group_count(); ++g) {
    for (std::size_t c = 0; c < n; ++c) {
      const double mass = cluster_mass[g][c];
      if (mass == 0.0) continue;
      for (std::size_t ch = 0; ch < n; ++ch) {
        loss += mass * obf.at(g, c, ch) * dist.at(c, ch);
      }
    }
  }
  return loss;
}

inline double utility_loss(const GroupedJoint& gj, const ObfuscationMatrix& obf,
                           const DistanceTable& dist) {
  return utility_loss(obf, dist, gj.cluster_mass());
}

}  // namespace hyobscure

#endif  // HYOBSCURE_INFOTHEORY_HPP
