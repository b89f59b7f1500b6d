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
// Stochastic privacy-utility boosting: perturbs group boundaries of the
// generalization function and accepts a candidate only when privacy leakage
// and utility loss both strictly decrease while the (k,alpha)/(l,beta)
// constraints hold.
#ifndef HYOBSCURE_GENBOOST_HPP
#define HYOBSCURE_GENBOOST_HPP

#include <optional>
#include <vector>

#include "hyobscure/generalization.hpp"
#include "hyobscure/infotheory.hpp"
#include "hyobscure/rng.hpp"

namespace hyobscure {

enum class MoveDirection { kShiftUp, kShiftDown };

// Boundary shift between a group and an adjacent neighbor. kShiftUp moves
// the boundary upward (the lower group absorbs the upper group's bottom
// value); kShiftDown moves it downward.
struct BoundaryMove {
  std::size_t group_index = 0;
  std::size_t neighbor_index = 0;
  MoveDirection direction = MoveDirection::kShiftUp;
  std::size_t width = 1;
};

struct CandidateEvaluation {
  double leakage_bits = 0.0;
  double utility_loss = 0.0;
  bool feasible = false;
};

// Uniformly samples a group, one of its neighbors, and a direction.
// Returns nullopt for single-group partitions.
inline std::optional<BoundaryMove> propose_move(const GeneralizationFn& gen,
                                                Rng& rng) {
  const std::size_t K = gen.group_count();
  if (K < 2) return std::nullopt;
  BoundaryMove move;
  move.group_index = rng.uniform_index(K);
  if (move.group_index == 0) {
    move.neighbor_index = 1;
  } else if (move.group_index == K - 1) {
    move.neighbor_index = K - 2;
  } else {
    move.neighbor_index =
        rng.bernoulli(0.5) ? move.group_index + 1 : move.group_index - 1;
  }
  move.direction =
      rng.bernoulli(0.5) ? MoveDirection::kShiftUp : MoveDirection::kShiftDown;
  move.width = 1;
  return move;
}

// Applies a boundary move; nullopt when it would empty a group.
inline std::optional<GeneralizationFn> apply_move(const GeneralizationFn& gen,
                                                  const BoundaryMove& move) {
  const std::size_t lower =
      std::min(move.group_index, move.neighbor_index);
  const std::size_t upper = lower + 1;
  if (upper >= gen.group_count()) return std::nullopt;
  GeneralizationFn out = gen;
  auto& lo = out.groups[lower];
  auto& hi = out.groups[upper];
  if (move.direction == MoveDirection::kShiftUp) {
    // Lower group absorbs `width` values from the upper group.
    if (hi.size() <= move.width) return std::nullopt;
    lo.end += move.width;
    hi.begin += move.width;
  } else {
    if (lo.size() <= move.width) return std::nullopt;
    lo.end -= move.width;
    hi.begin -= move.width;
  }
  return out;
}

// Leakage and re-weighted utility of a candidate partition with the
// obfuscation matrix held fixed.
inline CandidateEvaluation evaluate_candidate(
    const GeneralizationFn& candidate, const ObfuscationMatrix& obf,
    const Dataset& ds, const std::vector<std::size_t>& cluster_of,
    const DistanceTable& dist, const std::vector<std::size_t>& user_counts,
    const GenConstraints& cons) {
  CandidateEvaluation eval;
  eval.feasible = satisfies_constraints(candidate, user_counts, cons);
  const auto gj = build_grouped_joint(ds, candidate, cluster_of, obf.n_clusters);
  eval.leakage_bits = leakage(gj, obf);
  eval.utility_loss = utility_loss(gj, obf, dist);
  return eval;
}

struct BoostOptions {
  // SIZE_MAX: defaults to 50 * group count. 0 returns gen0 untouched.
  std::size_t max_stalls = SIZE_MAX;
  double delta = 0.0001;  // convergence threshold on improvements
};

struct BoostResult {
  GeneralizationFn gen;
  double leakage_bits = 0.0;
  double utility_loss = 0.0;
  std::size_t accepted = 0;
};

// Algorithm: repeat propose/evaluate; accept under strict Pareto dominance
// (both leakage and utility strictly lower, feasibility preserved). Stops
// after max_stalls consecutive rejections or when an accepted improvement
// falls below delta.
inline BoostResult boost(const GeneralizationFn& gen0,
                         const ObfuscationMatrix& obf, const Dataset& ds,
                         const std::vector<std::size_t>& cluster_of,
                         const DistanceTable& dist, const GenConstraints& cons,
                         Rng& rng, const BoostOptions& opts = {}) {
  const auto user_counts = value_user_counts(ds);
  const std::size_t max_stalls = opts.max_stalls != SIZE_MAX
                                     ? opts.max_stalls
                                     : 50 * gen0.group_count();

  BoostResult res;
  res.gen = gen0;
  {
    const auto e = evaluate_candidate(gen0, obf, ds, cluster_of, dist,
                                      user_counts, cons);
    res.leakage_bits = e.leakage_bits;
    res.utility_loss = e.utility_loss;
  }
  std::size_t stalls = 0;
  while (stalls < max_stalls) {
    const auto move = propose_move(res.gen, rng);
    if (!move) break;  // single group: nothing to perturb
    const auto candidate = apply_move(res.gen, *move);
    if (!candidate) {
      ++stalls;
      continue;
    }
    const auto e = evaluate_candidate(*candidate, obf, ds, cluster_of, dist,
                                      user_counts, cons);
    if (e.feasible && e.leakage_bits < res.leakage_bits &&
        e.utility_loss < res.utility_loss) {
      const double improvement = res.leakage_bits - e.leakage_bits;
      res.gen = *candidate;
      res.leakage_bits = e.leakage_bits;
      res.utility_loss = e.utility_loss;
      ++res.accepted;
      stalls = 0;
      if (improvement < opts.delta) break;
    } else {
      ++stalls;
    }
  }
  return res;
}

}  // namespace hyobscure

#endif  // HYOBSCURE_GENBOOST_HPP
