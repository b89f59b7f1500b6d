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
#ifndef HYOBSCURE_OBFUSCATION_HPP
#define HYOBSCURE_OBFUSCATION_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hyobscure {

// Users clustered by their privacy-insensitive features.
struct ClusterModel {
  std::vector<std::vector<double>> centroids;
  std::vector<std::size_t> assignment;  // user index -> cluster index

  std::size_t cluster_count() const { return centroids.size(); }
};

// Row-stochastic cluster-to-cluster transition probabilities, one |C|x|C|
// block per generalization group. The block structure itself restricts
// obfuscation to users sharing the same generalized value.
struct ObfuscationMatrix {
  std::size_t n_clusters = 0;
  std::vector<std::vector<double>> blocks;  // per group, row-major |C|x|C|
  double budget = 0.0;
  bool solver_warning = false;  // set when the solver stopped uncertified
  double achieved_gap = 0.0;    // duality-gap bound at termination

  std::size_t group_count() const { return blocks.size(); }

  double at(std::size_t group, std::size_t c, std::size_t c_hat) const {
    return blocks[group][c * n_clusters + c_hat];
  }
  double& at(std::size_t group, std::size_t c, std::size_t c_hat) {
    return blocks[group][c * n_clusters + c_hat];
  }

  static ObfuscationMatrix identity(std::size_t n_clusters,
                                    std::size_t n_groups) {
    ObfuscationMatrix m;
    m.n_clusters = n_clusters;
    m.blocks.assign(n_groups, std::vector<double>(n_clusters * n_clusters, 0.0));
    for (auto& b : m.blocks) {
      for (std::size_t c = 0; c < n_clusters; ++c) b[c * n_clusters + c] = 1.0;
    }
    return m;
  }

  static ObfuscationMatrix uniform(std::size_t n_clusters,
                                   std::size_t n_groups) {
    ObfuscationMatrix m;
    m.n_clusters = n_clusters;
    const double p = 1.0 / static_cast<double>(n_clusters);
    m.blocks.assign(n_groups, std::vector<double>(n_clusters * n_clusters, p));
    return m;
  }

  void validate(double row_tol = 1e-9) const {
    for (const auto& b : blocks) {
      if (b.size() != n_clusters * n_clusters) {
        throw std::invalid_argument("block size mismatch");
      }
      for (std::size_t c = 0; c < n_clusters; ++c) {
        double sum = 0.0;
        for (std::size_t h = 0; h < n_clusters; ++h) {
          const double v = b[c * n_clusters + h];
          if (v < -1e-12 || v > 1.0 + 1e-12) {
            throw std::invalid_argument("entry outside [0,1]");
          }
          sum += v;
        }
        if (std::abs(sum - 1.0) > row_tol) {
          throw std::invalid_argument("row not stochastic");
        }
      }
    }
  }
};

// Symmetric cluster-pair distance table with zero diagonal.
struct DistanceTable {
  std::size_t n = 0;
  std::vector<double> d;  // row-major

  double at(std::size_t a, std::size_t b) const { return d[a * n + b]; }

  double max_distance() const {
    double m = 0.0;
    for (double v : d) m = std::max(m, v);
    return m;
  }

  void validate() const {
    for (std::size_t a = 0; a < n; ++a) {
      if (d[a * n + a] != 0.0) throw std::invalid_argument("nonzero diagonal");
      for (std::size_t b = 0; b < n; ++b) {
        if (d[a * n + b] < 0.0) throw std::invalid_argument("negative distance");
        if (d[a * n + b] != d[b * n + a]) {
          throw std::invalid_argument("distance table not symmetric");
        }
      }
    }
  }
};

}  // namespace hyobscure

#endif  // HYOBSCURE_OBFUSCATION_HPP
