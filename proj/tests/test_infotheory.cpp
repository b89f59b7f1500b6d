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
#include <vector>

#include "hyobscure/dataset.hpp"
#include "hyobscure/infotheory.hpp"
#include "hyobscure/rng.hpp"

using namespace hyobscure;

namespace {

// Random dataset over small, fully controlled supports.
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

std::vector<std::size_t> random_clusters(Rng& rng, std::size_t n_users,
                                         std::size_t n_clusters) {
  std::vector<std::size_t> a(n_users);
  for (auto& v : a) v = rng.uniform_index(n_clusters);
  return a;
}

GeneralizationFn single_group(std::size_t domain) {
  GeneralizationFn gen;
  gen.groups.push_back({0, domain});
  gen.centers.push_back(0.0);
  return gen;
}

GeneralizationFn singleton_groups(std::size_t domain) {
  GeneralizationFn gen;
  for (std::size_t v = 0; v < domain; ++v) {
    gen.groups.push_back({v, v + 1});
    gen.centers.push_back(static_cast<double>(v));
  }
  return gen;
}

// Direct-summation mutual information, the independent oracle.
double mi_oracle(const EmpiricalJoint& j) {
  double mi = 0.0;
  const auto pr = j.row_marginal();
  const auto pc = j.col_marginal();
  for (std::size_t r = 0; r < j.rows; ++r) {
    for (std::size_t c = 0; c < j.cols; ++c) {
      if (j.at(r, c) > 0.0) {
        mi += j.at(r, c) * std::log2(j.at(r, c) / (pr[r] * pc[c]));
      }
    }
  }
  return mi;
}

}  // namespace

TEST_CASE("entropy of canonical distributions") {
  CHECK(entropy({{0.25, 0.25, 0.25, 0.25}}) ==
        doctest::Approx(2.0).epsilon(1e-15));
  CHECK(entropy({{1.0}}) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(entropy({{0.5, 0.25, 0.25}}) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(entropy({{0.5, 0.5, 0.0}}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(entropy({{0.5, 0.4}}), std::invalid_argument);
  CHECK_THROWS_AS(entropy({{-0.5, 1.5}}), std::invalid_argument);
}

TEST_CASE("mutual information of canonical joints") {
  EmpiricalJoint diag;
  diag.rows = diag.cols = 4;
  diag.p.assign(16, 0.0);
  for (std::size_t i = 0; i < 4; ++i) diag.at(i, i) = 0.25;
  CHECK(mutual_information(diag) == doctest::Approx(2.0).epsilon(1e-15));

  EmpiricalJoint indep;
  indep.rows = indep.cols = 2;
  indep.p = {0.25, 0.25, 0.25, 0.25};
  CHECK(mutual_information(indep) == doctest::Approx(0.0).epsilon(1e-15));

  EmpiricalJoint j;
  j.rows = j.cols = 2;
  j.p = {0.4, 0.1, 0.1, 0.4};
  CHECK(mutual_information(j) == doctest::Approx(mi_oracle(j)).epsilon(1e-12));
}

TEST_CASE("fano bound arithmetic") {
  CHECK(fano_bound(2.0, 1.0, 4) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(fano_bound(3.0, 0.0, 8) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(fano_bound(1.0, 1.0, 2) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(fano_bound(3.0, 0.5, 4) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK_THROWS_AS(fano_bound(1.0, 0.0, 1), std::invalid_argument);
}

TEST_CASE("cluster distances") {
  CHECK(cluster_distance({0.0, 0.0}, {3.0, 4.0},
                         DistanceMetric::kEuclidean) ==
        doctest::Approx(5.0).epsilon(1e-15));
  CHECK(cluster_distance({1.0, 0.0}, {0.0, 1.0},
                         DistanceMetric::kJsDivergence) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cluster_distance({0.5, 0.5}, {0.5, 0.5},
                         DistanceMetric::kJsDivergence) ==
        doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(cluster_distance({0.5, 0.6}, {0.5, 0.5},
                                   DistanceMetric::kJsDivergence),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      cluster_distance({1.0}, {1.0, 0.0}, DistanceMetric::kEuclidean),
      std::invalid_argument);
}

TEST_CASE("distance_table is symmetric with zero diagonal") {
  const auto t = distance_table({{0.0, 0.0}, {3.0, 4.0}, {6.0, 8.0}},
                                DistanceMetric::kEuclidean);
  CHECK_NOTHROW(t.validate());
  CHECK(t.at(0, 1) == doctest::Approx(5.0));
  CHECK(t.at(1, 2) == doctest::Approx(5.0));
  CHECK(t.at(0, 2) == doctest::Approx(10.0));
  CHECK(t.max_distance() == doctest::Approx(10.0));
}

TEST_CASE("identity obfuscation with one group recovers I(C;Y)") {
  Rng rng(101);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t nc = 2 + rng.uniform_index(5);
    const std::size_t dom = 2 + rng.uniform_index(7);
    auto ds = random_dataset(rng, 40 + rng.uniform_index(160), dom);
    const auto cl = random_clusters(rng, ds.user_count(), nc);
    const auto gj = build_grouped_joint(ds, single_group(ds.domain_size()),
                                        cl, nc);
    const auto obf = ObfuscationMatrix::identity(nc, 1);
    const auto mi = mi_oracle(empirical_joint(ds, cl, nc));
    CHECK(std::abs(leakage(gj, obf) - mi) < 1e-9);
  }
}

TEST_CASE("uniform rows collapse leakage to I(Ytilde;Y)") {
  Rng rng(202);
  const std::size_t nc = 4, dom = 8;
  auto ds = random_dataset(rng, 300, dom);
  const auto cl = random_clusters(rng, ds.user_count(), nc);
  GeneralizationFn gen;
  gen.groups = {{0, 3}, {3, 5}, {5, 8}};
  gen.centers = {1.0, 3.5, 6.0};
  const auto gj = build_grouped_joint(ds, gen, cl, nc);
  const auto obf = ObfuscationMatrix::uniform(nc, 3);

  // Oracle: joint over (group, value).
  EmpiricalJoint gy;
  gy.rows = 3;
  gy.cols = dom;
  gy.p.assign(3 * dom, 0.0);
  for (const auto& r : ds.records) {
    const std::size_t v = ds.value_index(r.private_value);
    gy.at(gen.group_of_value(v), v) +=
        1.0 / static_cast<double>(ds.user_count());
  }
  CHECK(std::abs(leakage(gj, obf) - mi_oracle(gy)) < 1e-9);
}

TEST_CASE("identity obfuscation with singleton groups leaks H(Y)") {
  Rng rng(303);
  const std::size_t nc = 3, dom = 5;
  auto ds = random_dataset(rng, 200, dom);
  const auto cl = random_clusters(rng, ds.user_count(), nc);
  const auto gen = singleton_groups(dom);
  const auto gj = build_grouped_joint(ds, gen, cl, nc);
  const auto obf = ObfuscationMatrix::identity(nc, dom);
  CHECK(std::abs(leakage(gj, obf) - gj.h_y()) < 1e-9);
}

TEST_CASE("leakage is invariant under cluster relabeling") {
  Rng rng(404);
  const std::size_t nc = 4, dom = 6;
  auto ds = random_dataset(rng, 150, dom);
  auto cl = random_clusters(rng, ds.user_count(), nc);
  GeneralizationFn gen;
  gen.groups = {{0, 3}, {3, 6}};
  gen.centers = {1.0, 4.0};

  ObfuscationMatrix obf;
  obf.n_clusters = nc;
  obf.blocks.assign(2, std::vector<double>(nc * nc, 0.0));
  for (auto& b : obf.blocks) {
    for (std::size_t c = 0; c < nc; ++c) {
      double z = 0.0;
      std::vector<double> row(nc);
      for (std::size_t h = 0; h < nc; ++h) {
        row[h] = 0.05 + rng.next_double();
        z += row[h];
      }
      for (std::size_t h = 0; h < nc; ++h) b[c * nc + h] = row[h] / z;
    }
  }
  const double base =
      leakage(build_grouped_joint(ds, gen, cl, nc), obf);

  // Swap cluster labels 0 and 1 everywhere.
  auto cl2 = cl;
  for (auto& c : cl2) c = c == 0 ? 1 : (c == 1 ? 0 : c);
  ObfuscationMatrix obf2 = obf;
  auto swap_idx = [](std::size_t c) { return c == 0 ? 1 : (c == 1 ? 0 : c); };
  for (std::size_t g = 0; g < 2; ++g) {
    for (std::size_t c = 0; c < nc; ++c) {
      for (std::size_t h = 0; h < nc; ++h) {
        obf2.at(g, swap_idx(c), swap_idx(h)) = obf.at(g, c, h);
      }
    }
  }
  const double swapped =
      leakage(build_grouped_joint(ds, gen, cl2, nc), obf2);
  CHECK(std::abs(base - swapped) < 1e-12);
}

TEST_CASE("utility loss is linear in matrix entries") {
  Rng rng(505);
  const std::size_t nc = 3;
  const auto dist =
      distance_table({{0.0}, {1.0}, {3.0}}, DistanceMetric::kEuclidean);
  std::vector<std::vector<double>> mass{{0.2, 0.3, 0.5}};
  const auto a = ObfuscationMatrix::identity(nc, 1);
  const auto b = ObfuscationMatrix::uniform(nc, 1);
  const double la = utility_loss(a, dist, mass);
  const double lb = utility_loss(b, dist, mass);
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    ObfuscationMatrix mix = a;
    for (std::size_t i = 0; i < nc * nc; ++i) {
      mix.blocks[0][i] = (1 - t) * a.blocks[0][i] + t * b.blocks[0][i];
    }
    CHECK(std::abs(utility_loss(mix, dist, mass) -
                   ((1 - t) * la + t * lb)) < 1e-12);
  }
  CHECK(la == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("clamp_bits only flattens negative round-off") {
  CHECK(clamp_bits(-1e-13) == 0.0);
  CHECK(clamp_bits(1e-13) == 1e-13);
  CHECK(clamp_bits(-1.0) == -1.0);
  CHECK(clamp_bits(2.5) == 2.5);
}
