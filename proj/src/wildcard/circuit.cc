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

#include "wildcard/circuit.h"

#include <algorithm>
#include <cctype>

#include "wildcard/error.h"

namespace wildcard {

bool is_valid_label(std::string_view label) {
  if (label.empty()) return false;
  return std::all_of(label.begin(), label.end(), [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
  });
}

Circuit::Circuit(std::vector<std::string> labels) : labels_(std::move(labels)) {
  for (const auto& l : labels_) {
    if (!is_valid_label(l)) throw_data("invalid gate label '" + l + "'");
  }
}

Circuit Circuit::parse(std::string_view text) {
  if (text == "{}") return Circuit();
  if (text.empty()) throw_data("empty circuit text (use \"{}\")");
  std::vector<std::string> labels;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = text.find(';', start);
    std::string_view piece = text.substr(start, pos == std::string_view::npos ? pos : pos - start);
    if (!is_valid_label(piece)) {
      throw_data("malformed circuit text '" + std::string(text) + "'");
    }
    labels.emplace_back(piece);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return Circuit(std::move(labels));
}

std::string Circuit::str() const {
  if (labels_.empty()) return "{}";
  std::string out;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (i) out += ';';
    out += labels_[i];
  }
  return out;
}

std::map<std::string, int> Circuit::gate_counts() const {
  std::map<std::string, int> counts;
  for (const auto& l : labels_) ++counts[l];
  return counts;
}

int Circuit::count(std::string_view label) const {
  return static_cast<int>(std::count(labels_.begin(), labels_.end(), label));
}

Circuit Circuit::repeated(int times) const {
  if (times < 0) throw_usage("negative repetition count");
  std::vector<std::string> out;
  out.reserve(labels_.size() * static_cast<std::size_t>(times));
  for (int i = 0; i < times; ++i) out.insert(out.end(), labels_.begin(), labels_.end());
  Circuit c;
  c.labels_ = std::move(out);
  return c;
}

Circuit Circuit::operator+(const Circuit& other) const {
  Circuit c;
  c.labels_ = labels_;
  c.labels_.insert(c.labels_.end(), other.labels_.begin(), other.labels_.end());
  return c;
}

}  // namespace wildcard
