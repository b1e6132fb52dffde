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

#ifndef WILDCARD_DATASET_H_
#define WILDCARD_DATASET_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "wildcard/circuit.h"
#include "wildcard/noise_models.h"

namespace wildcard {

struct OutcomeCounts {
  Circuit circuit;
  std::vector<std::string> outcomes;
  std::vector<std::int64_t> counts;

  std::int64_t total() const;
  // Counts reordered to `labels`; outcomes absent from the record count zero.
  // Throws Error(kData) if the record has an outcome not in `labels`.
  std::vector<std::int64_t> aligned(const std::vector<std::string>& labels) const;
};

// counts / N. Throws Error(kData) when N == 0.
ProbDist frequencies(const OutcomeCounts& oc);
ProbDist frequencies(const OutcomeCounts& oc, const std::vector<std::string>& labels);

class DataSet {
 public:
  DataSet() = default;

  // Throws Error(kData) on a duplicate circuit or inconsistent record.
  void add(OutcomeCounts record);
  const std::vector<OutcomeCounts>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  const OutcomeCounts* find(const Circuit& circuit) const;

  nlohmann::json provenance = nlohmann::json::object();

 private:
  std::vector<OutcomeCounts> records_;
  std::map<std::string, std::size_t> index_;
};

// Multinomial draw of N shots from model.predict(circuit), via sequential
// conditional binomials on an mt19937_64 stream seeded with `seed`.
OutcomeCounts simulate_counts(const ErrorModel& model, const Circuit& circuit, std::int64_t shots,
                              std::uint64_t seed);

// Each circuit is sampled on its own stream derive_seed(master_seed, text),
// so results do not depend on circuit order.
DataSet simulate_dataset(const ErrorModel& model,
                         std::span<const std::pair<Circuit, std::int64_t>> circuits_and_shots,
                         std::uint64_t master_seed);

// One record in the dataset file grammar:
//   {"circuit": "Gx;Gy", "counts": {"0": 512, "1": 488}}
std::string dataset_record_line(const OutcomeCounts& oc);
OutcomeCounts parse_dataset_record(const std::string& line);

void write_dataset(std::ostream& out, const DataSet& ds);
DataSet read_dataset(std::istream& in);
void save_dataset(const std::string& path, const DataSet& ds);
DataSet load_dataset(const std::string& path);

}  // namespace wildcard

#endif  // WILDCARD_DATASET_H_
