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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "hyobscure/dataset.hpp"
#include "hyobscure/infotheory.hpp"
#include "hyobscure/obfopt.hpp"
#include "hyobscure/rng.hpp"

using namespace hyobscure;

namespace {

Dataset random_dataset(Rng& rng, std::size_t n_users, std::size_t domain) {
  Dataset ds;
  ds.feature_dim = 1;
  ds.feature_names = {"f"};
  ds.private_domain.resize(domain);
  for (std::size_t v = 0; v < domain; ++v) {
    ds.private_domain[v] = static_cast<double>(v);
  }
  for (std::size_t u = 0; u < n_users; ++u) {
    ds.records.push_back({"u" + std::to_string(u),
                          {rng.next_double()},
                          static_cast<double>(rng.uniform_index(domain))});
  }
  return ds;
}

GeneralizationFn single_group(std::size_t domain) {
  GeneralizationFn gen;
  gen.groups.push_back({0, domain});
  gen.centers.push_back(0.0);
  return gen;
}

// Random single-group instance with |C| = 2 for the grid oracle.
struct TwoClusterInstance {
  GroupedJoint gj;
  DistanceTable dist;
  double budget;
};

TwoClusterInstance random_two_cluster(Rng& rng) {
  const std::size_t dom = 3;
  auto ds = random_dataset(rng, 30 + rng.uniform_index(60), dom);
  std::vector<std::size_t> cl(ds.user_count());
  for (auto& c : cl) c = rng.uniform_index(2);
  TwoClusterInstance inst;
  inst.gj = build_grouped_joint(ds, single_group(dom), cl, 2);
  inst.dist.n = 2;
  const double d = 0.5 + rng.next_double();
  inst.dist.d = {0.0, d, d, 0.0};
  const auto mass = inst.gj.cluster_mass();
  const double max_cost = (mass[0][0] + mass[0][1]) * d;
  inst.budget = rng.next_double() * max_cost;
  return inst;
}

// Exhaustive 0.001-step grid over the two free row parameters.
double grid_oracle(const TwoClusterInstance& inst) {
  const auto mass = inst.gj.cluster_mass();
  ObfuscationMatrix obf = ObfuscationMatrix::identity(2, 1);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 1000; ++i) {
    const double a = i * 0.001;  // O(1|0)
    const double cost_a = mass[0][0] * a * inst.dist.at(0, 1);
    if (cost_a > inst.budget + 1e-12) break;
    for (int j = 0; j <= 1000; ++j) {
      const double b = j * 0.001;  // O(0|1)
      const double cost = cost_a + mass[0][1] * b * inst.dist.at(0, 1);
      if (cost > inst.budget + 1e-12) break;
      obf.blocks[0] = {1.0 - a, a, b, 1.0 - b};
      best = std::min(best, leakage(inst.gj, obf));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("cluster_users recovers well-separated blobs") {
  const auto ds = synth_population(400, 4, 6, 0.5, 17);
  const auto model = cluster_users(ds, 4, 17);
  REQUIRE(model.assignment.size() == 400);
  // Every blob maps to a single cluster label and vice versa.
  std::vector<std::set<std::size_t>> labels(4);
  for (std::size_t u = 0; u < 400; ++u) {
    labels[u % 4].insert(model.assignment[u]);
  }
  std::set<std::size_t> all;
  for (const auto& s : labels) {
    CHECK(s.size() == 1);
    all.insert(*s.begin());
  }
  CHECK(all.size() == 4);
}

TEST_CASE("cluster_users is deterministic and covers all clusters") {
  const auto ds = synth_population(100, 3, 4, 0.5, 23);
  const auto a = cluster_users(ds, 5, 9);
  const auto b = cluster_users(ds, 5, 9);
  CHECK(a.assignment == b.assignment);
  std::set<std::size_t> used(a.assignment.begin(), a.assignment.end());
  CHECK(used.size() == 5);  // empty clusters repaired
  CHECK_THROWS_AS(cluster_users(ds, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(cluster_users(ds, 101, 1), std::invalid_argument);
}

TEST_CASE("zero budget keeps the identity and the unobscured leakage") {
  Rng rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t nc = 2 + rng.uniform_index(3);
    auto ds = random_dataset(rng, 80, 4);
    std::vector<std::size_t> cl(ds.user_count());
    for (auto& c : cl) c = rng.uniform_index(nc);
    const auto gj = build_grouped_joint(ds, single_group(4), cl, nc);
    std::vector<std::vector<double>> cents(nc);
    for (std::size_t c = 0; c < nc; ++c) cents[c] = {static_cast<double>(c)};
    const auto dist = distance_table(cents, DistanceMetric::kEuclidean);
    const auto obf = solve_obfuscation(gj, dist, 0.0);
    const auto identity = ObfuscationMatrix::identity(nc, 1);
    CHECK(std::abs(leakage(gj, obf) - leakage(gj, identity)) < 1e-6);
    CHECK(utility_loss(gj, obf, dist) < 1e-9);
  }
}

TEST_CASE("unbounded budget reaches complete mixing") {
  Rng rng(72);
  auto ds = random_dataset(rng, 200, 5);
  const std::size_t nc = 3;
  std::vector<std::size_t> cl(ds.user_count());
  for (auto& c : cl) c = rng.uniform_index(nc);
  const auto gj = build_grouped_joint(ds, single_group(5), cl, nc);
  std::vector<std::vector<double>> cents{{0.0}, {1.0}, {2.0}};
  const auto dist = distance_table(cents, DistanceMetric::kEuclidean);
  // With one group, complete mixing removes all cluster information.
  const auto obf = solve_obfuscation(gj, dist, dist.max_distance());
  CHECK(leakage(gj, obf) < 1e-4);
  CHECK(utility_loss(gj, obf, dist) <= dist.max_distance() + 1e-9);
}

TEST_CASE("solver matches the 2-cluster grid oracle") {
  Rng rng(73);
  for (int trial = 0; trial < 8; ++trial) {
    const auto inst = random_two_cluster(rng);
    const auto obf = solve_obfuscation(inst.gj, inst.dist, inst.budget);
    const double got = leakage(inst.gj, obf);
    const double oracle = grid_oracle(inst);
    CHECK(got <= oracle + 1e-3);
    CHECK(utility_loss(inst.gj, obf, inst.dist) <= inst.budget + 1e-9);
  }
}

TEST_CASE("gradient matches central finite differences") {
  Rng rng(74);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t nc = 2 + rng.uniform_index(2);
    auto ds = random_dataset(rng, 120, 4);
    std::vector<std::size_t> cl(ds.user_count());
    for (auto& c : cl) c = rng.uniform_index(nc);
    GeneralizationFn gen;
    gen.groups = {{0, 2}, {2, 4}};
    gen.centers = {0.5, 2.5};
    const auto gj = build_grouped_joint(ds, gen, cl, nc);

    // Random interior feasible point.
    ObfuscationMatrix x;
    x.n_clusters = nc;
    x.blocks.assign(2, std::vector<double>(nc * nc, 0.0));
    for (auto& block : x.blocks) {
      for (std::size_t c = 0; c < nc; ++c) {
        double z = 0.0;
        std::vector<double> row(nc);
        for (std::size_t h = 0; h < nc; ++h) {
          row[h] = 0.1 + rng.next_double();
          z += row[h];
        }
        for (std::size_t h = 0; h < nc; ++h) block[c * nc + h] = row[h] / z;
      }
    }
    const auto grad = leakage_gradient(x, gj);
    const double h = 1e-5;
    for (std::size_t g = 0; g < 2; ++g) {
      for (std::size_t i = 0; i < nc * nc; ++i) {
        auto xp = x, xm = x;
        xp.blocks[g][i] += h;
        xm.blocks[g][i] -= h;
        const double fd = (leakage(gj, xp) - leakage(gj, xm)) / (2.0 * h);
        CHECK(std::abs(grad[g][i] - fd) < 1e-4);
      }
    }
  }
}

TEST_CASE("looser budgets never increase the optimal leakage") {
  Rng rng(75);
  auto ds = random_dataset(rng, 150, 4);
  const std::size_t nc = 3;
  std::vector<std::size_t> cl(ds.user_count());
  for (auto& c : cl) c = rng.uniform_index(nc);
  const auto gj = build_grouped_joint(ds, single_group(4), cl, nc);
  const auto dist = distance_table({{0.0}, {1.0}, {2.5}},
                                   DistanceMetric::kEuclidean);
  double prev = std::numeric_limits<double>::infinity();
  for (double budget : {0.0, 0.1, 0.3, 0.6, 1.0, 2.0}) {
    const auto obf = solve_obfuscation(gj, dist, budget);
    const double leak = leakage(gj, obf);
    CHECK(leak <= prev + 1e-6);
    CHECK(utility_loss(gj, obf, dist) <= budget + 1e-9);
    prev = leak;
  }
}

TEST_CASE("solutions are row-stochastic and warm starts stay feasible") {
  Rng rng(76);
  auto ds = random_dataset(rng, 100, 4);
  const std::size_t nc = 3;
  std::vector<std::size_t> cl(ds.user_count());
  for (auto& c : cl) c = rng.uniform_index(nc);
  GeneralizationFn gen;
  gen.groups = {{0, 2}, {2, 4}};
  gen.centers = {0.5, 2.5};
  const auto gj = build_grouped_joint(ds, gen, cl, nc);
  const auto dist = distance_table({{0.0}, {1.0}, {2.0}},
                                   DistanceMetric::kEuclidean);
  const auto first = solve_obfuscation(gj, dist, 0.4);
  CHECK_NOTHROW(first.validate(1e-6));
  const auto second = solve_obfuscation(gj, dist, 0.4, {}, &first);
  CHECK_NOTHROW(second.validate(1e-6));
  CHECK(leakage(gj, second) <= leakage(gj, first) + 1e-9);
  CHECK_THROWS_AS(solve_obfuscation(gj, dist, -1.0), std::invalid_argument);
}
