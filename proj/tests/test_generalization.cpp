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

#include "hyobscure/dataset.hpp"
#include "hyobscure/generalization.hpp"

using namespace hyobscure;

namespace {

Dataset tiny_dataset() {
  Dataset ds;
  ds.feature_dim = 1;
  ds.feature_names = {"f"};
  ds.private_domain = {10.0, 20.0, 30.0, 40.0};
  // Counts per value: 10 -> 2, 20 -> 1, 30 -> 2, 40 -> 1.
  const double vals[] = {10, 10, 20, 30, 30, 40};
  for (int i = 0; i < 6; ++i) {
    ds.records.push_back({"u" + std::to_string(i), {0.0}, vals[i]});
  }
  return ds;
}

}  // namespace

TEST_CASE("group_of_value respects interval boundaries") {
  GeneralizationFn gen;
  gen.groups = {{0, 2}, {2, 4}};
  gen.centers = {15.0, 35.0};
  CHECK(gen.group_of_value(0) == 0);
  CHECK(gen.group_of_value(1) == 0);
  CHECK(gen.group_of_value(2) == 1);
  CHECK(gen.group_of_value(3) == 1);
  CHECK_THROWS_AS(gen.group_of_value(4), std::out_of_range);
}

TEST_CASE("group labels span actual private values") {
  const auto ds = tiny_dataset();
  GeneralizationFn gen;
  gen.groups = {{0, 2}, {2, 4}};
  gen.centers = {15.0, 35.0};
  CHECK(gen.group_label(0, ds) == "[10,20]");
  CHECK(gen.group_label(1, ds) == "[30,40]");
}

TEST_CASE("validate rejects gaps, overlaps, and partial covers") {
  GeneralizationFn ok;
  ok.groups = {{0, 2}, {2, 4}};
  CHECK_NOTHROW(ok.validate(4));

  GeneralizationFn gap;
  gap.groups = {{0, 2}, {3, 4}};
  CHECK_THROWS_AS(gap.validate(4), std::invalid_argument);

  GeneralizationFn partial;
  partial.groups = {{0, 2}};
  CHECK_THROWS_AS(partial.validate(4), std::invalid_argument);

  GeneralizationFn empty_group;
  empty_group.groups = {{0, 0}, {0, 4}};
  CHECK_THROWS_AS(empty_group.validate(4), std::invalid_argument);

  GeneralizationFn none;
  CHECK_THROWS_AS(none.validate(4), std::invalid_argument);
}

TEST_CASE("value_user_counts tallies per domain value") {
  const auto ds = tiny_dataset();
  CHECK(value_user_counts(ds) == std::vector<std::size_t>{2, 1, 2, 1});
}

TEST_CASE("satisfies_constraints checks all four bounds per group") {
  const auto ds = tiny_dataset();
  const auto counts = value_user_counts(ds);
  GeneralizationFn gen;
  gen.groups = {{0, 2}, {2, 4}};  // 3 users / 2 values each

  CHECK(satisfies_constraints(gen, counts, {3, 3, 2, 2, 2}));
  CHECK_FALSE(satisfies_constraints(gen, counts, {4, 10, 1, 10, 2}));  // k
  CHECK_FALSE(satisfies_constraints(gen, counts, {1, 2, 1, 10, 2}));   // alpha
  CHECK_FALSE(satisfies_constraints(gen, counts, {1, 10, 3, 10, 2}));  // l
  CHECK_FALSE(satisfies_constraints(gen, counts, {1, 10, 1, 1, 2}));   // beta
}
