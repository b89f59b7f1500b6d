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
#ifndef HYOBSCURE_GENERALIZATION_HPP
#define HYOBSCURE_GENERALIZATION_HPP

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyobscure/dataset.hpp"

namespace hyobscure {

// Interval of value indices over the ordered private domain: [begin, end).
struct ValueInterval {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
};

// Ordered partition of the private domain into contiguous groups. Every
// exact value maps to exactly one group; group order follows value order.
struct GeneralizationFn {
  std::vector<ValueInterval> groups;
  std::vector<double> centers;  // per-group centroid over values

  std::size_t group_count() const { return groups.size(); }

  std::size_t group_of_value(std::size_t value_index) const {
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (value_index >= groups[g].begin && value_index < groups[g].end) {
        return g;
      }
    }
    throw std::out_of_range("value index outside the partition");
  }

  // "[lo,hi]" over actual private values, the published group label.
  std::string group_label(std::size_t g, const Dataset& ds) const {
    std::ostringstream os;
    os.precision(17);
    os << '[' << ds.private_domain[groups[g].begin] << ','
       << ds.private_domain[groups[g].end - 1] << ']';
    return os.str();
  }

  void validate(std::size_t domain_size) const {
    if (groups.empty()) throw std::invalid_argument("empty partition");
    std::size_t expect = 0;
    for (const auto& g : groups) {
      if (g.begin != expect || g.end <= g.begin) {
        throw std::invalid_argument("groups must be contiguous and ordered");
      }
      expect = g.end;
    }
    if (expect != domain_size) {
      throw std::invalid_argument("groups must cover the private domain");
    }
  }
};

struct GenConstraints {
  std::size_t k = 1;             // min users per group
  std::size_t alpha = SIZE_MAX;  // max users per group
  std::size_t l = 1;             // min distinct values per group
  std::size_t beta = SIZE_MAX;   // max distinct values per group
  std::size_t group_count = 1;   // K
};

// Per-value user counts, the sufficient statistic for the constraints.
inline std::vector<std::size_t> value_user_counts(const Dataset& ds) {
  std::vector<std::size_t> counts(ds.domain_size(), 0);
  for (const auto& r : ds.records) ++counts[ds.value_index(r.private_value)];
  return counts;
}

inline bool satisfies_constraints(const GeneralizationFn& gen,
                                  const std::vector<std::size_t>& user_counts,
                                  const GenConstraints& cons) {
  for (const auto& g : gen.groups) {
    std::size_t users = 0;
    for (std::size_t v = g.begin; v < g.end; ++v) users += user_counts[v];
    const std::size_t values = g.size();
    if (users < cons.k || users > cons.alpha) return false;
    if (values < cons.l || values > cons.beta) return false;
  }
  return true;
}

}  // namespace hyobscure

#endif  // HYOBSCURE_GENERALIZATION_HPP
