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
#ifndef HYOBSCURE_DATASET_HPP
#define HYOBSCURE_DATASET_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyobscure/rng.hpp"

namespace hyobscure {

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One user: privacy-insensitive feature vector plus a single exact private
// value from a finite ordered domain.
struct UserRecord {
  std::string user_id;
  std::vector<double> features;
  double private_value = 0.0;
};

struct Dataset {
  std::vector<UserRecord> records;
  std::vector<double> private_domain;  // sorted ascending, distinct
  std::size_t feature_dim = 0;
  std::vector<std::string> feature_names;
  std::string private_name = "private";

  std::size_t user_count() const { return records.size(); }
  std::size_t domain_size() const { return private_domain.size(); }

  // Index of a private value in the ordered domain.
  std::size_t value_index(double y) const {
    auto it =
        std::lower_bound(private_domain.begin(), private_domain.end(), y);
    if (it == private_domain.end() || *it != y) {
      throw DatasetError("private value not in declared domain");
    }
    return static_cast<std::size_t>(it - private_domain.begin());
  }

  void validate() const {
    if (records.size() < 2) throw DatasetError("dataset needs >= 2 records");
    for (std::size_t i = 1; i < private_domain.size(); ++i) {
      if (!(private_domain[i - 1] < private_domain[i])) {
        throw DatasetError("private domain must be sorted and distinct");
      }
    }
    for (const auto& r : records) {
      if (r.features.size() != feature_dim) {
        throw DatasetError("inconsistent feature dimensionality");
      }
      for (double v : r.features) {
        if (!std::isfinite(v)) throw DatasetError("non-finite feature value");
      }
      value_index(r.private_value);
    }
  }
};

// Discrete joint probability table; entries sum to 1.
struct EmpiricalJoint {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> p;  // row-major

  double& at(std::size_t r, std::size_t c) { return p[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return p[r * cols + c]; }

  std::vector<double> row_marginal() const {
    std::vector<double> m(rows, 0.0);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) m[r] += at(r, c);
    return m;
  }
  std::vector<double> col_marginal() const {
    std::vector<double> m(cols, 0.0);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) m[c] += at(r, c);
    return m;
  }

  void validate() const {
    double sum = 0.0;
    for (double v : p) {
      if (v < 0.0) throw DatasetError("negative joint probability");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw DatasetError("joint probabilities do not sum to 1");
    }
  }
};

struct CsvSchema {
  std::string private_column;
  std::string id_column;  // empty: ids are row numbers
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
      cur.push_back(ch);
    } else if (ch == ',' && !quoted) {
      cells.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  cells.push_back(cur);
  return cells;
}

inline double parse_number(const std::string& cell, std::size_t row,
                           const std::string& column) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(cell, &pos);
    while (pos < cell.size() &&
           (cell[pos] == ' ' || cell[pos] == '\t')) {
      ++pos;
    }
    if (pos != cell.size()) throw std::invalid_argument("trailing chars");
    return v;
  } catch (const std::exception&) {
    throw DatasetError("non-numeric cell at row " + std::to_string(row) +
                       ", column '" + column + "': '" + cell + "'");
  }
}

}  // namespace detail

// Loads a header-first CSV. One column is the private attribute, the
// remaining numeric columns become the feature vector in header order.
inline Dataset load_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw DatasetError("cannot open file: " + path);

  std::string header;
  if (!std::getline(in, header)) throw DatasetError("empty file: " + path);
  const auto columns = detail::split_csv_line(header);

  std::size_t private_idx = columns.size();
  std::size_t id_idx = columns.size();
  Dataset ds;
  std::vector<std::size_t> feature_idx;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == schema.private_column) {
      private_idx = i;
    } else if (!schema.id_column.empty() && columns[i] == schema.id_column) {
      id_idx = i;
    } else {
      feature_idx.push_back(i);
      ds.feature_names.push_back(columns[i]);
    }
  }
  if (private_idx == columns.size()) {
    throw DatasetError("missing private column '" + schema.private_column +
                       "'");
  }
  if (!schema.id_column.empty() && id_idx == columns.size()) {
    throw DatasetError("missing id column '" + schema.id_column + "'");
  }
  if (feature_idx.empty()) throw DatasetError("no feature columns");
  ds.private_name = schema.private_column;
  ds.feature_dim = feature_idx.size();

  std::string line;
  std::size_t row = 1;  // header is row 1
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != columns.size()) {
      throw DatasetError("row " + std::to_string(row) + " has " +
                         std::to_string(cells.size()) + " cells, expected " +
                         std::to_string(columns.size()));
    }
    UserRecord rec;
    rec.user_id = id_idx < columns.size()
                      ? cells[id_idx]
                      : std::to_string(ds.records.size());
    rec.private_value =
        detail::parse_number(cells[private_idx], row, columns[private_idx]);
    rec.features.reserve(ds.feature_dim);
    for (std::size_t f : feature_idx) {
      rec.features.push_back(detail::parse_number(cells[f], row, columns[f]));
    }
    ds.records.push_back(std::move(rec));
  }
  if (ds.records.empty()) throw DatasetError("empty dataset: " + path);

  std::vector<double> domain;
  domain.reserve(ds.records.size());
  for (const auto& r : ds.records) domain.push_back(r.private_value);
  std::sort(domain.begin(), domain.end());
  domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
  ds.private_domain = std::move(domain);
  return ds;
}

// Mirrors the input schema: id, features, private column.
inline void export_csv(const Dataset& ds, std::ostream& out) {
  out << "user_id";
  for (const auto& name : ds.feature_names) out << ',' << name;
  out << ',' << ds.private_name << '\n';
  out.precision(17);
  for (const auto& r : ds.records) {
    out << r.user_id;
    for (double v : r.features) out << ',' << v;
    out << ',' << r.private_value << '\n';
  }
}

inline void export_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DatasetError("cannot write file: " + path);
  export_csv(ds, out);
}

// Plug-in joint over (cluster, private value): counts divided by |U|.
// No smoothing; empty cells stay exactly zero.
inline EmpiricalJoint empirical_joint(const Dataset& ds,
                                      const std::vector<std::size_t>& cluster_of,
                                      std::size_t n_clusters) {
  if (cluster_of.size() != ds.user_count()) {
    throw DatasetError("cluster map does not cover all users");
  }
  EmpiricalJoint joint;
  joint.rows = n_clusters;
  joint.cols = ds.domain_size();
  joint.p.assign(joint.rows * joint.cols, 0.0);
  const double w = 1.0 / static_cast<double>(ds.user_count());
  for (std::size_t u = 0; u < ds.user_count(); ++u) {
    const std::size_t c = cluster_of[u];
    if (c >= n_clusters) throw DatasetError("cluster index out of range");
    joint.at(c, ds.value_index(ds.records[u].private_value)) += w;
  }
  return joint;
}

// Synthetic correlated population: Gaussian blobs around separated
// centroids, private value tied to the blob with probability `correlation`
// and uniform otherwise. Same seed gives a bit-identical dataset.
inline Dataset synth_population(std::size_t n_users, std::size_t n_clusters,
                                std::size_t private_domain_size,
                                double correlation, std::uint64_t seed) {
  if (n_clusters < 1 || n_users < n_clusters) {
    throw DatasetError("need n_users >= n_clusters >= 1");
  }
  if (private_domain_size < 2) {
    throw DatasetError("private domain size must be >= 2");
  }
  if (correlation < 0.0 || correlation > 1.0) {
    throw DatasetError("correlation must be in [0,1]");
  }
  Rng rng(seed);
  Dataset ds;
  ds.feature_dim = n_clusters;
  ds.feature_names.resize(ds.feature_dim);
  for (std::size_t f = 0; f < ds.feature_dim; ++f) {
    ds.feature_names[f] = "f" + std::to_string(f);
  }
  ds.private_name = "y";
  ds.private_domain.resize(private_domain_size);
  for (std::size_t v = 0; v < private_domain_size; ++v) {
    ds.private_domain[v] = static_cast<double>(v);
  }
  ds.records.reserve(n_users);
  for (std::size_t u = 0; u < n_users; ++u) {
    const std::size_t blob = u % n_clusters;  // balanced blobs
    UserRecord rec;
    rec.user_id = "u" + std::to_string(u);
    rec.features.resize(ds.feature_dim);
    for (std::size_t f = 0; f < ds.feature_dim; ++f) {
      rec.features[f] = (f == blob ? 10.0 : 0.0) + rng.normal();
    }
    std::size_t value = blob % private_domain_size;
    if (!rng.bernoulli(correlation)) {
      value = rng.uniform_index(private_domain_size);
    }
    rec.private_value = static_cast<double>(value);
    ds.records.push_back(std::move(rec));
  }
  return ds;
}

}  // namespace hyobscure

#endif  // HYOBSCURE_DATASET_HPP
