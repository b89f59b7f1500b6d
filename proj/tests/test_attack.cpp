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

#include "hyobscure/attack.hpp"
#include "hyobscure/dataset.hpp"
#include "hyobscure/pipeline.hpp"

using namespace hyobscure;

namespace {

// Singleton groups: the generalized label pins the exact private value.
GeneralizationFn singleton_groups(std::size_t domain) {
  GeneralizationFn gen;
  for (std::size_t v = 0; v < domain; ++v) {
    gen.groups.push_back({v, v + 1});
    gen.centers.push_back(static_cast<double>(v));
  }
  return gen;
}

}  // namespace

TEST_CASE("attack on unprotected data with singleton groups is perfect") {
  const auto ds = synth_population(200, 4, 4, 1.0, 1);
  const auto clusters = cluster_users(ds, 4, 1);
  const auto gen = singleton_groups(4);
  const auto obf = ObfuscationMatrix::identity(4, 4);
  const auto pub = publish(ds, obf, gen, clusters, 2);
  AttackScenario scenario;
  scenario.kind = ScenarioKind::kScenarioOne;
  scenario.knn = 1;
  const double mae = simulate_attack(pub, ds, scenario, 3);
  CHECK(mae == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("complete mixing with a single group hides the private value") {
  const auto ds = synth_population(1000, 4, 4, 1.0, 2);
  const auto clusters = cluster_users(ds, 4, 2);
  GeneralizationFn gen;
  gen.groups.push_back({0, 4});
  gen.centers.push_back(1.5);
  const auto uniform = ObfuscationMatrix::uniform(4, 1);
  const auto pub = publish(ds, uniform, gen, clusters, 3);
  AttackScenario scenario;
  scenario.kind = ScenarioKind::kScenarioOne;
  const double mae_mixed = simulate_attack(pub, ds, scenario, 4);

  const auto identity = ObfuscationMatrix::identity(4, 1);
  const auto pub_id = publish(ds, identity, gen, clusters, 3);
  const double mae_clear = simulate_attack(pub_id, ds, scenario, 4);
  // Mixing strictly raises the attacker's error on correlated data.
  CHECK(mae_mixed > mae_clear + 0.1);
}

TEST_CASE("scenario II trains on published features") {
  const auto ds = synth_population(400, 4, 8, 0.7, 5);
  const auto clusters = cluster_users(ds, 4, 5);
  GeneralizationFn gen;
  gen.groups = {{0, 4}, {4, 8}};
  gen.centers = {1.5, 5.5};
  const auto obf = ObfuscationMatrix::uniform(4, 2);
  const auto pub = publish(ds, obf, gen, clusters, 6);
  AttackScenario one{ScenarioKind::kScenarioOne, 0.2, 5, false};
  AttackScenario two{ScenarioKind::kScenarioTwo, 0.2, 5, false};
  const double e1 = simulate_attack(pub, ds, one, 7);
  const double e2 = simulate_attack(pub, ds, two, 7);
  CHECK(e1 >= 0.0);
  CHECK(e2 >= 0.0);
  CHECK(e1 != doctest::Approx(e2).epsilon(1e-12));  // different train views
}

TEST_CASE("categorical scoring returns an error rate in [0,1]") {
  const auto ds = synth_population(300, 4, 4, 0.9, 8);
  const auto clusters = cluster_users(ds, 4, 8);
  GeneralizationFn gen;
  gen.groups.push_back({0, 4});
  gen.centers.push_back(1.5);
  const auto obf = ObfuscationMatrix::uniform(4, 1);
  const auto pub = publish(ds, obf, gen, clusters, 9);
  AttackScenario scenario;
  scenario.categorical = true;
  const double err = simulate_attack(pub, ds, scenario, 10);
  CHECK(err >= 0.0);
  CHECK(err <= 1.0);
}

TEST_CASE("simulate_attack validates its inputs") {
  const auto ds = synth_population(100, 4, 4, 0.5, 11);
  const auto clusters = cluster_users(ds, 4, 11);
  GeneralizationFn gen;
  gen.groups.push_back({0, 4});
  gen.centers.push_back(1.5);
  const auto pub =
      publish(ds, ObfuscationMatrix::identity(4, 1), gen, clusters, 12);
  AttackScenario bad_frac;
  bad_frac.train_fraction = 0.0;
  CHECK_THROWS_AS(simulate_attack(pub, ds, bad_frac, 1),
                  std::invalid_argument);
  AttackScenario big_k;
  big_k.train_fraction = 0.05;
  big_k.knn = 50;
  CHECK_THROWS_AS(simulate_attack(pub, ds, big_k, 1), std::invalid_argument);
}

TEST_CASE("sweep aggregates per-cell means and is reproducible") {
  const auto ds = synth_population(250, 4, 8, 0.7, 13);
  PipelineConfig cfg;
  cfg.gen_constraints = {25, 160, 2, 5, 3};
  cfg.n_clusters = 4;
  AttackScenario scenario;
  const std::vector<Method> methods{Method::kRandom, Method::kFrapp};
  const std::vector<double> budgets{0.5, 2.0};
  const std::vector<std::uint64_t> seeds{1, 2};
  const auto a = sweep(ds, methods, budgets, cfg, scenario, seeds);
  const auto b = sweep(ds, methods, budgets, cfg, scenario, seeds);
  REQUIRE(a.points.size() == 4);
  CHECK(a.failures.empty());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].seed_count == 2);
    CHECK(a.points[i].leakage_bits == b.points[i].leakage_bits);
    CHECK(a.points[i].attack_error == b.points[i].attack_error);
    CHECK(a.points[i].realized_utility_loss <= a.points[i].budget + 1e-6);
    CHECK(a.points[i].fano_lower_bound >= 0.0);
  }
}

TEST_CASE("method names cover every variant") {
  CHECK(std::string(method_name(Method::kHyObscure)) == "hyobscure");
  CHECK(std::string(method_name(Method::kRandom)) == "random");
  CHECK(std::string(method_name(Method::kFrapp)) == "frapp");
  CHECK(std::string(method_name(Method::kSimp)) == "simp");
  CHECK(std::string(method_name(Method::kDp)) == "dp");
  CHECK(std::string(method_name(Method::kPrivCheck)) == "privcheck");
  CHECK(std::string(method_name(Method::kXObf)) == "xobf");
  CHECK(std::string(method_name(Method::kYGen)) == "ygen");
}
