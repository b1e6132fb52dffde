// Copyright 2026 The Wildcard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wildcard/dataset.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>

#include "wildcard/error.h"
#include "wildcard/random.h"

namespace wildcard {

std::int64_t OutcomeCounts::total() const {
  std::int64_t n = 0;
  for (auto c : counts) n += c;
  return n;
}

std::vector<std::int64_t> OutcomeCounts::aligned(const std::vector<std::string>& labels) const {
  std::vector<std::int64_t> out(labels.size(), 0);
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    auto it = std::find(labels.begin(), labels.end(), outcomes[k]);
    if (it == labels.end()) {
      if (counts[k] == 0) continue;
      throw_data("outcome '" + outcomes[k] + "' of circuit " + circuit.str() + " is not predicted by the model");
    }
    out[static_cast<std::size_t>(it - labels.begin())] += counts[k];
  }
  return out;
}

ProbDist frequencies(const OutcomeCounts& oc) { return frequencies(oc, oc.outcomes); }

ProbDist frequencies(const OutcomeCounts& oc, const std::vector<std::string>& labels) {
  const std::int64_t n = oc.total();
  if (n <= 0) throw_data("circuit " + oc.circuit.str() + " has zero shots");
  const auto counts = oc.aligned(labels);
  ProbDist f(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) f[k] = static_cast<double>(counts[k]) / static_cast<double>(n);
  return f;
}

void DataSet::add(OutcomeCounts record) {
  if (record.outcomes.size() != record.counts.size()) throw_data("outcome/count length mismatch");
  for (auto c : record.counts) {
    if (c < 0) throw_data("negative count for circuit " + record.circuit.str());
  }
  const std::string key = record.circuit.str();
  if (!index_.emplace(key, records_.size()).second) throw_data("duplicate circuit " + key + " in dataset");
  records_.push_back(std::move(record));
}

const OutcomeCounts* DataSet::find(const Circuit& circuit) const {
  auto it = index_.find(circuit.str());
  return it == index_.end() ? nullptr : &records_[it->second];
}

OutcomeCounts simulate_counts(const ErrorModel& model, const Circuit& circuit, std::int64_t shots,
                              std::uint64_t seed) {
  if (shots < 1) throw_usage("number of shots must be >= 1");
  const ProbDist p = model.predict(circuit);
  Rng rng(seed);
  OutcomeCounts oc{circuit, model.outcome_labels(), std::vector<std::int64_t>(p.size(), 0)};
  std::int64_t remaining = shots;
  double mass = 1.0;
  for (std::size_t k = 0; k + 1 < p.size() && remaining > 0; ++k) {
    const double cond = mass > 0.0 ? std::clamp(p[k] / mass, 0.0, 1.0) : 0.0;
    std::int64_t draw = 0;
    if (cond >= 1.0) {
      draw = remaining;
    } else if (cond > 0.0) {
      std::binomial_distribution<std::int64_t> bin(remaining, cond);
      draw = bin(rng);
    }
    oc.counts[k] = draw;
    remaining -= draw;
    mass -= p[k];
  }
  oc.counts.back() += remaining;
  return oc;
}

DataSet simulate_dataset(const ErrorModel& model,
                         std::span<const std::pair<Circuit, std::int64_t>> circuits_and_shots,
                         std::uint64_t master_seed) {
  DataSet ds;
  for (const auto& [circuit, shots] : circuits_and_shots) {
    ds.add(simulate_counts(model, circuit, shots, derive_seed(master_seed, circuit.str())));
  }
  return ds;
}

std::string dataset_record_line(const OutcomeCounts& oc) {
  std::string line = "{\"circuit\": \"" + oc.circuit.str() + "\", \"counts\": {";
  for (std::size_t k = 0; k < oc.outcomes.size(); ++k) {
    if (k) line += ", ";
    line += "\"" + oc.outcomes[k] + "\": " + std::to_string(oc.counts[k]);
  }
  line += "}}";
  return line;
}

OutcomeCounts parse_dataset_record(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw_data(std::string("malformed dataset record: ") + e.what());
  }
  if (!j.is_object() || j.size() != 2 || !j.contains("circuit") || !j.contains("counts") ||
      !j["circuit"].is_string() || !j["counts"].is_object() || j["counts"].empty()) {
    throw_data("dataset record must be {\"circuit\": <text>, \"counts\": {<outcome>: <int>, ...}}");
  }
  OutcomeCounts oc;
  oc.circuit = Circuit::parse(j["circuit"].get<std::string>());
  for (const auto& [outcome, value] : j["counts"].items()) {
    if (!value.is_number_integer() || value.get<std::int64_t>() < 0) {
      throw_data("count for outcome '" + outcome + "' must be a non-negative integer");
    }
    oc.outcomes.push_back(outcome);
    oc.counts.push_back(value.get<std::int64_t>());
  }
  return oc;
}

void write_dataset(std::ostream& out, const DataSet& ds) {
  for (const auto& r : ds.records()) out << dataset_record_line(r) << '\n';
}

DataSet read_dataset(std::istream& in) {
  DataSet ds;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ds.add(parse_dataset_record(line));
  }
  return ds;
}

void save_dataset(const std::string& path, const DataSet& ds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_data("cannot open " + path + " for writing");
  write_dataset(out, ds);
  if (!out) throw_data("failed writing " + path);
}

DataSet load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_data("cannot open dataset " + path);
  return read_dataset(in);
}

}  // namespace wildcard
