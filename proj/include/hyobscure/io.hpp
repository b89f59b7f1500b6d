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
// File formats: report JSON (17 significant digits for floats), published
// CSV, and the tradeoff-sweep CSV.
#ifndef HYOBSCURE_IO_HPP
#define HYOBSCURE_IO_HPP

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hyobscure/attack.hpp"
#include "hyobscure/pipeline.hpp"

namespace hyobscure {

inline nlohmann::json report_to_json(const ObscureReport& r) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& pt : r.iteration_trace) {
    trace.push_back({{"leakage_bits", pt.leakage_bits},
                     {"utility_loss", pt.utility_loss}});
  }
  return nlohmann::json{
      {"iteration_trace", trace},
      {"initial_leakage_bits", r.initial_leakage_bits},
      {"final_leakage_bits", r.final_leakage_bits},
      {"final_utility_loss", r.final_utility_loss},
      {"iterations", r.iterations},
      {"theorem2_iters_bound", r.theorem2_iters_bound},
      {"theorem3_rhs_bits", r.theorem3_rhs_bits},
      {"constraints_ok", r.constraints_ok},
      {"solver_warning", r.solver_warning},
      {"delta", r.delta},
      {"seed", r.seed}};
}

inline ObscureReport report_from_json(const nlohmann::json& j) {
  ObscureReport r;
  for (const auto& pt : j.at("iteration_trace")) {
    r.iteration_trace.push_back({pt.at("leakage_bits").get<double>(),
                                 pt.at("utility_loss").get<double>()});
  }
  r.initial_leakage_bits = j.at("initial_leakage_bits").get<double>();
  r.final_leakage_bits = j.at("final_leakage_bits").get<double>();
  r.final_utility_loss = j.at("final_utility_loss").get<double>();
  r.iterations = j.at("iterations").get<std::size_t>();
  r.theorem2_iters_bound = j.at("theorem2_iters_bound").get<std::size_t>();
  r.theorem3_rhs_bits = j.at("theorem3_rhs_bits").get<double>();
  r.constraints_ok = j.at("constraints_ok").get<bool>();
  r.solver_warning = j.at("solver_warning").get<bool>();
  r.delta = j.at("delta").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  return r;
}

inline void write_report(const ObscureReport& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report: " + path);
  // nlohmann serializes doubles with 17 significant digits (round-trip).
  out << report_to_json(r).dump(2) << '\n';
}

inline ObscureReport read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read report: " + path);
  nlohmann::json j;
  in >> j;
  return report_from_json(j);
}

inline void write_published(const PublishedDataset& pub, std::ostream& out) {
  out << "user_id";
  for (const auto& name : pub.feature_names) out << ',' << name;
  out << ",y_group\n";
  out.precision(17);
  for (const auto& rec : pub.records) {
    out << rec.user_id;
    for (double v : rec.features) out << ',' << v;
    out << ",\"" << rec.group_label << "\"\n";
  }
}

inline void write_published(const PublishedDataset& pub,
                            const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write published data: " + path);
  write_published(pub, out);
}

inline void write_sweep_csv(const SweepResult& sweep, std::ostream& out) {
  out << "method,budget,realized_utility_loss,leakage_bits,attack_error,"
         "fano_bound,seed_count\n";
  out.precision(17);
  for (const auto& pt : sweep.points) {
    out << method_name(pt.method) << ',' << pt.budget << ','
        << pt.realized_utility_loss << ',' << pt.leakage_bits << ','
        << pt.attack_error << ',' << pt.fano_lower_bound << ','
        << pt.seed_count << '\n';
  }
}

inline void write_sweep_csv(const SweepResult& sweep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write sweep: " + path);
  write_sweep_csv(sweep, out);
}

// Published CSV reader (the `attack` subcommand scores a published file).
inline PublishedDataset read_published(const std::string& path,
                                       const Dataset& ds) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read published data: " + path);
  std::string header;
  if (!std::getline(in, header)) {
    throw std::runtime_error("empty published file: " + path);
  }
  PublishedDataset pub;
  {
    auto cols = detail::split_csv_line(header);
    if (cols.size() < 3 || cols.front() != "user_id" ||
        cols.back() != "y_group") {
      throw std::runtime_error("unexpected published header");
    }
    pub.feature_names.assign(cols.begin() + 1, cols.end() - 1);
  }
  // Group labels are mapped back to indices by first occurrence order of
  // interval lower bounds.
  std::vector<std::pair<double, std::string>> labels;
  std::string line;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    auto cells = detail::split_csv_line(line);
    PublishedRecord rec;
    rec.user_id = cells.at(0);
    for (std::size_t i = 1; i + 1 < cells.size(); ++i) {
      rec.features.push_back(detail::parse_number(cells[i], row, "feature"));
    }
    std::string label = cells.back();
    if (label.size() >= 2 && label.front() == '"' && label.back() == '"') {
      label = label.substr(1, label.size() - 2);
    }
    rec.group_label = label;
    const double lo = std::stod(label.substr(1));
    std::size_t idx = labels.size();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i].second == label) {
        idx = i;
        break;
      }
    }
    if (idx == labels.size()) labels.push_back({lo, label});
    rec.group_index = idx;
    pub.records.push_back(std::move(rec));
  }
  // Renumber groups in interval order.
  std::vector<std::size_t> rank(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) rank[i] = i;
  std::sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
    return labels[a].first < labels[b].first;
  });
  std::vector<std::size_t> order(labels.size());
  for (std::size_t i = 0; i < rank.size(); ++i) order[rank[i]] = i;
  for (auto& rec : pub.records) rec.group_index = order[rec.group_index];
  (void)ds;
  return pub;
}

}  // namespace hyobscure

#endif  // HYOBSCURE_IO_HPP
