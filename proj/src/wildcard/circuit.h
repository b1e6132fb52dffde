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

#ifndef WILDCARD_CIRCUIT_H_
#define WILDCARD_CIRCUIT_H_

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace wildcard {

// An ordered sequence of gate labels, applied left to right in time.
// State preparation and measurement are implicit and not part of the layers.
//
// Canonical text form: labels joined by ';' ("Gx;Gy;Gx"); the empty circuit is
// "{}". Labels are non-empty runs of [A-Za-z0-9_].
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(std::vector<std::string> labels);

  // Throws Error(kData) on malformed text.
  static Circuit parse(std::string_view text);

  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t depth() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }

  std::string str() const;

  // n_g(C) for every label present in the circuit.
  std::map<std::string, int> gate_counts() const;
  int count(std::string_view label) const;

  Circuit repeated(int times) const;
  Circuit operator+(const Circuit& other) const;

  auto operator<=>(const Circuit&) const = default;
  bool operator==(const Circuit&) const = default;

 private:
  std::vector<std::string> labels_;
};

bool is_valid_label(std::string_view label);

}  // namespace wildcard

#endif  // WILDCARD_CIRCUIT_H_
